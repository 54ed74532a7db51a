// Copyright 2026 The offlex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OFFLEX_ERROR_H_
#define OFFLEX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace offlex {

enum class ErrorCode {
  kFileNotFound,
  kIo,
  kSchemaMismatch,
  kLabelDomain,
  kMalformedRecord,
  kDuplicateId,
  kEmptyCorpus,
  kWrongTask,
  kDegenerateClass,
  kTooFewExamples,
  kConfigInvalid,
  kDuplicateEntry,
  kUnknownContextLabel,
  kUnknownPolarity,
  kUnknownEmotion,
  kMissingLexicon,
  kMissingPosAnnotations,
  kSingleClass,
  kNoVariance,
  kVocabularyMismatch,
  kGridMismatch,
  kNegativeWeight,
  kNonFiniteLoss,
  kIdMismatch,
  kModelVersionMismatch,
  kModelFormat,
  kUsage,
};

// Stable name of an error code, e.g. "LabelDomainError".
std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this exception.
// Loaders that validate many records at once collect one line per offending
// record in details() instead of stopping at the first problem.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message,
        std::vector<std::string> details = {});

  ErrorCode code() const { return code_; }
  const std::vector<std::string> &details() const { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace offlex

#endif  // OFFLEX_ERROR_H_
