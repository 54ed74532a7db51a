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

#include "offlex/error.h"

#include <utility>

namespace offlex {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kLabelDomain: return "LabelDomainError";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kWrongTask: return "WrongTask";
    case ErrorCode::kDegenerateClass: return "DegenerateClass";
    case ErrorCode::kTooFewExamples: return "TooFewExamples";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kUnknownContextLabel: return "UnknownContextLabel";
    case ErrorCode::kUnknownPolarity: return "UnknownPolarity";
    case ErrorCode::kUnknownEmotion: return "UnknownEmotion";
    case ErrorCode::kMissingLexicon: return "MissingLexicon";
    case ErrorCode::kMissingPosAnnotations: return "MissingPosAnnotations";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNoVariance: return "NoVariance";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kModelVersionMismatch: return "ModelVersionMismatch";
    case ErrorCode::kModelFormat: return "ModelFormatError";
    case ErrorCode::kUsage: return "UsageError";
  }
  return "Unknown";
}

namespace {

std::string Compose(ErrorCode code, const std::string &message,
                    const std::vector<std::string> &details) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  out += message;
  for (const std::string &d : details) {
    out += "\n  ";
    out += d;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string &message,
             std::vector<std::string> details)
    : std::runtime_error(Compose(code, message, details)),
      code_(code),
      details_(std::move(details)) {}

}  // namespace offlex
