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

#ifndef OFFLEX_CSV_H_
#define OFFLEX_CSV_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace offlex {

struct DelimitedRecord {
  std::vector<std::string> fields;
  size_t line = 0;  // 1-based line on which the record starts
};

// Reads delimiter-separated records. With quoting enabled the reader follows
// RFC 4180 (double-quoted fields, "" escapes, embedded newlines); without it
// every line is one record split on the delimiter. CRLF endings are accepted.
class DelimitedReader {
 public:
  DelimitedReader(std::istream &in, char delimiter, bool quoting);

  // Returns false at end of input. Throws Error(kMalformedRecord) on an
  // unterminated quoted field.
  bool Next(DelimitedRecord *record);

 private:
  std::istream &in_;
  char delimiter_;
  bool quoting_;
  size_t line_ = 0;
};

// Quotes a field for CSV output when it contains a comma, quote or newline.
std::string CsvEscape(std::string_view field);

void WriteCsvRow(std::ostream &out, std::span<const std::string> fields);

}  // namespace offlex

#endif  // OFFLEX_CSV_H_
