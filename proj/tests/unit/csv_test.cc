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

#include <sstream>

#include <gtest/gtest.h>

#include "offlex/error.h"

namespace offlex {
namespace {

std::vector<DelimitedRecord> ReadAll(const std::string &text, char delim,
                                     bool quoting) {
  std::istringstream in(text);
  DelimitedReader reader(in, delim, quoting);
  std::vector<DelimitedRecord> out;
  DelimitedRecord r;
  while (reader.Next(&r)) out.push_back(r);
  return out;
}

TEST(CsvTest, QuotedFieldsWithCommasQuotesAndNewlines) {
  auto rows = ReadAll("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n", ',', true);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x, y", "say \"hi\""}));
  EXPECT_EQ(rows[2].fields, (std::vector<std::string>{"multi\nline", "z"}));
  EXPECT_EQ(rows[2].line, 3u);
}

TEST(CsvTest, CrlfAndMissingFinalNewline) {
  auto rows = ReadAll("a,b\r\n1,2", ',', true);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", "2"}));
}

TEST(CsvTest, TsvKeepsQuotesLiterally) {
  auto rows = ReadAll("a\t\"b\n", '\t', false);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fields[1], "\"b");
}

TEST(CsvTest, UnterminatedQuoteIsMalformed) {
  try {
    ReadAll("a\n\"open,x\n", ',', true);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
  }
}

TEST(CsvTest, EscapeRoundTrips) {
  const std::vector<std::string> fields = {"plain", "a,b", "q\"q", "n\nl", ""};
  std::ostringstream out;
  WriteCsvRow(out, fields);
  auto rows = ReadAll(out.str(), ',', true);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fields, fields);
  EXPECT_EQ(CsvEscape("plain"), "plain");
}

}  // namespace
}  // namespace offlex
