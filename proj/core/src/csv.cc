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

#include "offlex/csv.h"

#include "offlex/error.h"

namespace offlex {

DelimitedReader::DelimitedReader(std::istream &in, char delimiter,
                                 bool quoting)
    : in_(in), delimiter_(delimiter), quoting_(quoting) {}

bool DelimitedReader::Next(DelimitedRecord *record) {
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record->fields.clear();
  record->line = line_;
  auto chomp = [](std::string &s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  chomp(line);

  if (!quoting_) {
    size_t start = 0;
    while (true) {
      size_t pos = line.find(delimiter_, start);
      if (pos == std::string::npos) {
        record->fields.push_back(line.substr(start));
        break;
      }
      record->fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    return true;
  }

  std::string field;
  bool in_quotes = false;
  bool was_quoted = false;
  size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!in_quotes) break;
      // Quoted field continues on the next physical line.
      std::string next;
      if (!std::getline(in_, next)) {
        throw Error(ErrorCode::kMalformedRecord,
                    "unterminated quoted field starting on line " +
                        std::to_string(record->line));
      }
      ++line_;
      chomp(next);
      field.push_back('\n');
      line = std::move(next);
      i = 0;
      continue;
    }
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      in_quotes = true;
      was_quoted = true;
    } else if (c == delimiter_) {
      record->fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
    ++i;
  }
  record->fields.push_back(std::move(field));
  return true;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteCsvRow(std::ostream &out, std::span<const std::string> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(fields[i]);
  }
  out << '\n';
}

}  // namespace offlex
