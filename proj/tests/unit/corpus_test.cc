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

#include "offlex/corpus.h"

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "offlex/error.h"
#include "test_util.h"

namespace offlex {
namespace {

using testing::CodeOf;
using testing::Doc;
using testing::TempDir;
using testing::WriteText;

const CorpusSchema kSchema{"id", "text", "offensive", "hate", ""};

std::vector<Document> Balanced(size_t pos, size_t neg, Task task) {
  std::vector<Document> docs;
  for (size_t i = 0; i < pos + neg; ++i) {
    const int y = i < pos ? 1 : 0;
    docs.push_back(task == Task::kOffensive
                       ? Doc("d" + std::to_string(i), "texto " + std::to_string(i), y)
                       : Doc("d" + std::to_string(i), "texto " + std::to_string(i), 1, y));
  }
  return docs;
}

TEST(LoadCorpusTest, ReadsCsvWithSchema) {
  TempDir dir;
  WriteText(dir / "c.csv",
            "comment,id,label\n\"oi, tudo bem\",a,0\nvai embora,b,1\n");
  Corpus c = LoadCorpus(dir / "c.csv", CorpusFormat::kCsv,
                        {"id", "comment", "label", "", ""}, Task::kOffensive);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].text, "oi, tudo bem");
  EXPECT_EQ(c.Labels(), (std::vector<int>{0, 1}));
}

TEST(LoadCorpusTest, EmptyFileIsEmptyCorpus) {
  TempDir dir;
  WriteText(dir / "e.csv", "");
  EXPECT_EQ(CodeOf([&] {
              LoadCorpus(dir / "e.csv", CorpusFormat::kCsv, kSchema, Task::kOffensive);
            }),
            ErrorCode::kEmptyCorpus);
}

TEST(LoadCorpusTest, BadLabelNamesRow2) {
  TempDir dir;
  WriteText(dir / "t.tsv", "id\ttext\toffensive\na\tum\t0\nb\tdois\t2\nc\ttres\t1\n");
  try {
    LoadDocuments(dir / "t.tsv", CorpusFormat::kTsv, {"id", "text", "offensive", "", ""});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelDomain);
    ASSERT_EQ(e.details().size(), 1u);
    EXPECT_NE(e.details()[0].find("row 2"), std::string::npos) << e.details()[0];
  }
}

TEST(LoadCorpusTest, MissingFileAndColumn) {
  TempDir dir;
  EXPECT_EQ(CodeOf([&] {
              LoadDocuments(dir / "nope.csv", CorpusFormat::kCsv, kSchema);
            }),
            ErrorCode::kFileNotFound);
  WriteText(dir / "c.csv", "id,text\na,b\n");
  EXPECT_EQ(CodeOf([&] { LoadDocuments(dir / "c.csv", CorpusFormat::kCsv, kSchema); }),
            ErrorCode::kSchemaMismatch);
}

TEST(LoadCorpusTest, RejectsHateWithoutOffense) {
  TempDir dir;
  WriteText(dir / "c.csv", "id,text,offensive,hate\na,x,0,1\n");
  EXPECT_EQ(CodeOf([&] { LoadDocuments(dir / "c.csv", CorpusFormat::kCsv, kSchema); }),
            ErrorCode::kLabelDomain);
}

TEST(LoadCorpusTest, DuplicateIdsRejected) {
  TempDir dir;
  WriteText(dir / "c.csv", "id,text,offensive\na,x,0\na,y,1\n");
  EXPECT_EQ(CodeOf([&] {
              LoadDocuments(dir / "c.csv", CorpusFormat::kCsv,
                            {"id", "text", "offensive", "", ""});
            }),
            ErrorCode::kDuplicateId);
}

TEST(LoadCorpusTest, PosColumnParsed) {
  TempDir dir;
  WriteText(dir / "c.jsonl",
            "{\"id\":\"a\",\"text\":\"ele correu\",\"offensive\":0,"
            "\"pos\":\"ele/PRON correu/VERB\"}\n");
  auto docs = LoadDocuments(dir / "c.jsonl", CorpusFormat::kJsonl,
                            {"id", "text", "offensive", "", "pos"});
  ASSERT_EQ(docs.size(), 1u);
  ASSERT_TRUE(docs[0].pos_tags);
  EXPECT_EQ((*docs[0].pos_tags)[1], (TaggedToken{"correu", "VERB"}));
}

TEST(LoadCorpusTest, RoundTripAllFormats) {
  std::vector<Document> docs = {Doc("1", "primeiro, com \"aspas\"", 1, 1),
                                Doc("2", "segundo", 0, 0), Doc("3", "terceiro", 1, 0)};
  docs[0].pos_tags = std::vector<TaggedToken>{{"primeiro", "ADJ"}, {"com", "ADP"}};
  docs[1].pos_tags = std::vector<TaggedToken>{{"segundo", "ADJ"}};
  docs[2].pos_tags = std::vector<TaggedToken>{{"terceiro", "ADJ"}};
  const CorpusSchema schema{"id", "text", "offensive", "hate", "pos"};
  TempDir dir;
  for (CorpusFormat f : {CorpusFormat::kCsv, CorpusFormat::kTsv, CorpusFormat::kJsonl}) {
    const auto path = dir / ("c." + std::string(CorpusFormatName(f)));
    SaveDocuments(docs, path, f, schema);
    Corpus once = LoadCorpus(path, f, schema, Task::kOffensive);
    SaveDocuments(once.documents(), path, f, schema);
    Corpus twice = LoadCorpus(path, f, schema, Task::kOffensive);
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.documents(), docs);
  }
}

TEST(CorpusTest, TaskCorpusForHateKeepsOffensiveComments) {
  std::vector<Document> docs = {Doc("a", "x", 0, 0), Doc("b", "y", 1, 0),
                                Doc("c", "z", 1, 1)};
  Corpus hate = MakeTaskCorpus(docs, Task::kHateSpeech);
  EXPECT_EQ(hate.size(), 2u);
  Corpus all = MakeTaskCorpus(docs, Task::kHateSpeech, false);
  EXPECT_EQ(all.size(), 3u);
}

TEST(UndersampleTest, SevenTwentySevenEach) {
  Corpus c(Balanced(727, 2227, Task::kHateSpeech), Task::kHateSpeech);
  Corpus u = Undersample(c, 0);
  EXPECT_EQ(u.Counts().positive, 727u);
  EXPECT_EQ(u.Counts().negative, 727u);
  std::set<std::string> in_ids, out_ids;
  for (const auto &d : c.documents()) in_ids.insert(d.id);
  for (const auto &d : u.documents()) {
    EXPECT_TRUE(in_ids.count(d.id));
    out_ids.insert(d.id);
  }
  for (size_t i = 0; i < 727; ++i) EXPECT_TRUE(out_ids.count("d" + std::to_string(i)));
}

TEST(UndersampleTest, BalancedIsNoOp) {
  Corpus c(Balanced(10, 10, Task::kHateSpeech), Task::kHateSpeech);
  Corpus u = Undersample(c, 3);
  EXPECT_EQ(u.Counts().positive, 10u);
  EXPECT_EQ(u.Counts().negative, 10u);
}

TEST(UndersampleTest, DeterministicForSeed) {
  Corpus c(Balanced(3, 9, Task::kHateSpeech), Task::kHateSpeech);
  TempDir dir;
  SaveDocuments(Undersample(c, 42).documents(), dir / "a.csv", CorpusFormat::kCsv, kSchema);
  SaveDocuments(Undersample(c, 42).documents(), dir / "b.csv", CorpusFormat::kCsv, kSchema);
  EXPECT_EQ(testing::ReadText(dir / "a.csv"), testing::ReadText(dir / "b.csv"));
  EXPECT_NE(Undersample(c, 42).documents(), Undersample(c, 43).documents());
}

TEST(UndersampleTest, Errors) {
  Corpus off(Balanced(3, 9, Task::kOffensive), Task::kOffensive);
  EXPECT_EQ(CodeOf([&] { Undersample(off); }), ErrorCode::kWrongTask);
  Corpus one(Balanced(0, 4, Task::kHateSpeech), Task::kHateSpeech);
  EXPECT_EQ(CodeOf([&] { Undersample(one); }), ErrorCode::kDegenerateClass);
}

TEST(FoldsTest, LargeBalancedCorpus) {
  Corpus c(Balanced(727, 727, Task::kHateSpeech), Task::kHateSpeech);
  FoldPlan plan = MakeFolds(c, 10, 0);
  std::vector<size_t> seen(c.size(), 0);
  for (int f = 0; f < 10; ++f) {
    auto test = plan.TestIndices(f);
    EXPECT_TRUE(test.size() == 145 || test.size() == 146) << test.size();
    size_t pos = 0;
    for (size_t i : test) {
      pos += c.Label(i);
      ++seen[i];
    }
    EXPECT_TRUE(pos == 72 || pos == 73) << pos;
    EXPECT_EQ(plan.TrainIndices(f).size() + test.size(), c.size());
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](size_t n) { return n == 1; }));
}

TEST(FoldsTest, TwoByTwo) {
  Corpus c(Balanced(2, 2, Task::kOffensive), Task::kOffensive);
  FoldPlan plan = MakeFolds(c, 2, 9);
  for (int f = 0; f < 2; ++f) {
    auto test = plan.TestIndices(f);
    ASSERT_EQ(test.size(), 2u);
    EXPECT_EQ(c.Label(test[0]) + c.Label(test[1]), 1);
  }
}

TEST(FoldsTest, StratificationBoundOnOddSizes) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Corpus c(Balanced(37, 61, Task::kOffensive), Task::kOffensive);
    for (int k : {2, 3, 7, 10}) {
      FoldPlan plan = MakeFolds(c, k, seed);
      for (int f = 0; f < k; ++f) {
        double pos = 0, neg = 0;
        for (size_t i : plan.TestIndices(f)) (c.Label(i) ? pos : neg) += 1;
        EXPECT_LE(std::abs(pos - 37.0 / k), 1.0);
        EXPECT_LE(std::abs(neg - 61.0 / k), 1.0);
      }
    }
  }
}

TEST(FoldsTest, Errors) {
  Corpus c(Balanced(5, 20, Task::kOffensive), Task::kOffensive);
  EXPECT_EQ(CodeOf([&] { MakeFolds(c, 10); }), ErrorCode::kTooFewExamples);
  EXPECT_EQ(CodeOf([&] { MakeFolds(c, 1); }), ErrorCode::kConfigInvalid);
  FoldPlan plan = MakeFolds(c, 5);
  EXPECT_EQ(CodeOf([&] { plan.FoldOf("missing"); }), ErrorCode::kIdMismatch);
}

TEST(FoldsTest, CsvExport) {
  Corpus c(Balanced(2, 2, Task::kOffensive), Task::kOffensive);
  FoldPlan plan = MakeFolds(c, 2);
  std::ostringstream out;
  WriteFoldPlanCsv(plan, c, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, 12), "doc_id,fold\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

}  // namespace
}  // namespace offlex
