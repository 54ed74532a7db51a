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


#include "offlex/eval.h"

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "offlex/random.h"
#include "test_util.h"

namespace offlex {
namespace {

using testing::CodeOf;
using testing::Doc;

Prediction P(const std::string &id, int label) { return {id, label, 0.0}; }

TEST(ScoreTest, CountsAndMetrics) {
  std::vector<Prediction> pred = {P("a", 1), P("b", 1), P("c", 1), P("d", 1),
                                  P("e", 0), P("f", 0), P("g", 0), P("h", 0)};
  std::map<std::string, int> gold = {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 0},
                                     {"e", 1}, {"f", 1}, {"g", 0}, {"h", 0}};
  ConfusionMatrix cm = Score(pred, gold);
  EXPECT_EQ(cm, (ConfusionMatrix{3, 1, 2, 2}));
  Prf p = PositiveClassMetrics(cm);
  EXPECT_DOUBLE_EQ(p.precision, 0.75);
  EXPECT_DOUBLE_EQ(p.recall, 0.6);
  EXPECT_NEAR(p.f1, 2.0 / 3.0, 1e-12);

  MetricsTable t = ComputeMetrics(cm);
  EXPECT_EQ(t.per_class[1], p);
  EXPECT_EQ(t.per_class[0], PositiveClassMetrics(cm.Swapped()));
  EXPECT_NEAR(t.avg.f1, (t.per_class[0].f1 + t.per_class[1].f1) / 2, 1e-15);
}

TEST(ScoreTest, EmptyDenominatorsGiveZero) {
  Prf p = PositiveClassMetrics({0, 0, 0, 5});
  EXPECT_EQ(p, (Prf{0, 0, 0}));
}

TEST(ScoreTest, SwappingTwiceIsIdentity) {
  ConfusionMatrix cm{4, 3, 2, 1};
  EXPECT_EQ(cm.Swapped().Swapped(), cm);
  EXPECT_EQ(cm.Swapped(), (ConfusionMatrix{1, 2, 3, 4}));
}

TEST(ScoreTest, IdsMustMatch) {
  std::vector<Prediction> pred = {P("a", 1), P("b", 0)};
  EXPECT_EQ(CodeOf([&] { Score(pred, {{"a", 1}}); }), ErrorCode::kIdMismatch);
  EXPECT_EQ(CodeOf([&] { Score(pred, {{"a", 1}, {"c", 0}}); }),
            ErrorCode::kIdMismatch);
  std::vector<Prediction> dup = {P("a", 1), P("a", 0)};
  EXPECT_EQ(CodeOf([&] { Score(dup, {{"a", 1}, {"b", 0}}); }),
            ErrorCode::kIdMismatch);
}

// Class-pure vocabularies: every class 0 comment uses a*, every class 1
// comment b*.
Corpus SeparableCorpus(size_t n) {
  std::vector<Document> docs;
  Rng rng(1);
  for (size_t i = 0; i < n; ++i) {
    const int label = i % 2;
    std::string text;
    for (int w = 0; w < 6; ++w) {
      text += (label ? "b" : "a") + std::to_string(rng.UniformIndex(8)) + " ";
    }
    docs.push_back(Doc("d" + std::to_string(i), text, label));
  }
  return Corpus(std::move(docs), Task::kOffensive);
}

CellSpec BowNb() {
  CellSpec cell;
  cell.representation = Representation::kBow;
  return cell;
}

TEST(CrossValidateTest, SeparableCorpusIsPerfect) {
  Corpus corpus = SeparableCorpus(100);
  auto docs = RunPipeline(corpus.documents(), testing::PlainPipeline());
  EvalReport r = CrossValidate(corpus, MakeFolds(corpus, 10), docs, BowNb(), {});
  EXPECT_EQ(r.metrics.avg.f1, 1.0);
  EXPECT_EQ(r.folds.size(), 10u);
  EXPECT_EQ(r.pooled.total(), 100u);
}

TEST(CrossValidateTest, PooledIsSumOfFolds) {
  testing::SyntheticSetup s = testing::MakeSyntheticSetup(
      {.documents = 150, .seed = 4}, Task::kOffensive);
  EvalReport r = CrossValidate(*s.corpus, MakeFolds(*s.corpus, 5), s.docs,
                               BowNb(), s.resources);
  ConfusionMatrix sum;
  for (const auto &f : r.folds) sum += f;
  EXPECT_EQ(sum, r.pooled);
  EXPECT_EQ(r.metrics, ComputeMetrics(r.pooled));
  ASSERT_EQ(r.fold_metrics.size(), 5u);
  EXPECT_EQ(r.fold_metrics[2], ComputeMetrics(r.folds[2]));
}

TEST(CrossValidateTest, RandomLabelsStayNearChance) {
  double total = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticData data = GenerateSynthetic({.documents = 200, .seed = seed});
    Rng rng(seed + 100);
    for (auto &d : data.documents) {
      d.offensive = static_cast<int>(rng.UniformIndex(2));
      d.hate = 0;
    }
    Corpus corpus(std::move(data.documents), Task::kOffensive);
    auto docs = RunPipeline(corpus.documents(), testing::PlainPipeline());
    total += CrossValidate(corpus, MakeFolds(corpus, 10, seed), docs, BowNb(), {})
                 .metrics.avg.f1;
  }
  const double mean = total / 20;
  EXPECT_GE(mean, 0.4);
  EXPECT_LE(mean, 0.6);
}

TEST(CrossValidateTest, DuplicatedHalvesGiveEqualFolds) {
  Corpus base = SeparableCorpus(20);
  std::vector<Document> docs = base.documents();
  for (size_t i = 0; i < 20; ++i) {
    Document copy = base[i];
    copy.id = "copy" + std::to_string(i);
    // Flip a few labels in both halves so the folds are not trivially perfect.
    docs.push_back(copy);
  }
  for (size_t i : {3, 7}) {
    docs[i].offensive = 1 - *docs[i].offensive;
    docs[i + 20].offensive = docs[i].offensive;
  }
  Corpus corpus(docs, Task::kOffensive);
  std::vector<int> fold_of(40);
  std::vector<std::string> ids;
  for (size_t i = 0; i < 40; ++i) {
    fold_of[i] = i < 20 ? 0 : 1;
    ids.push_back(corpus[i].id);
  }
  FoldPlan plan(2, 0, fold_of, ids);
  auto tok = RunPipeline(corpus.documents(), testing::PlainPipeline());
  for (auto kind : {ClassifierKind::kNb, ClassifierKind::kSvm}) {
    CellSpec cell = BowNb();
    cell.classifier.kind = kind;
    EvalReport r = CrossValidate(corpus, plan, tok, cell, {});
    EXPECT_EQ(r.folds[0], r.folds[1]) << cell.classifier.Name();
  }
}

TEST(CrossValidateTest, TestFoldsNeverReachTraining) {
  testing::SyntheticSetup s = testing::MakeSyntheticSetup(
      {.documents = 80, .seed = 9}, Task::kOffensive);
  // A token that occurs in one comment only.
  const size_t victim = 5;
  s.docs[victim].tokens.push_back("zzcanary");
  FoldPlan plan = MakeFolds(*s.corpus, 4);
  const int victim_fold = plan.FoldOfIndex(victim);

  for (auto rep : {Representation::kBow, Representation::kBm}) {
    for (auto sel : {SelectionMethod::kNone, SelectionMethod::kInfoGain,
                     SelectionMethod::kCfs}) {
      CellSpec cell;
      cell.representation = rep;
      cell.selector.method = sel;
      int observed = 0;
      CrossValidate(*s.corpus, plan, s.docs, cell, s.resources,
                    [&](const FoldObservation &o) {
                      ++observed;
                      std::set<std::string> test_ids;
                      for (const auto &d : o.test) test_ids.insert(d.id);
                      for (const auto &d : o.train) {
                        EXPECT_EQ(test_ids.count(d.id), 0u);
                      }
                      const bool has = o.pipeline->vocabulary().Id("zzcanary")
                                           .has_value();
                      EXPECT_EQ(has, o.fold != victim_fold) << o.fold;
                    });
      EXPECT_EQ(observed, 4);
    }
  }
}

TEST(CrossValidateTest, RejectsMisalignedInput) {
  Corpus corpus = SeparableCorpus(20);
  auto docs = RunPipeline(corpus.documents(), testing::PlainPipeline());
  FoldPlan plan = MakeFolds(corpus, 2);
  docs.pop_back();
  EXPECT_EQ(CodeOf([&] { CrossValidate(corpus, plan, docs, BowNb(), {}); }),
            ErrorCode::kIdMismatch);
  auto docs2 = RunPipeline(corpus.documents(), testing::PlainPipeline());
  CellSpec hate = BowNb();
  hate.task = Task::kHateSpeech;
  EXPECT_EQ(CodeOf([&] { CrossValidate(corpus, plan, docs2, hate, {}); }),
            ErrorCode::kWrongTask);
  CellSpec mol = BowNb();
  mol.representation = Representation::kMol;
  EXPECT_EQ(CodeOf([&] { CrossValidate(corpus, plan, docs2, mol, {}); }),
            ErrorCode::kMissingLexicon);
}

class ReportTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    reports_ = new std::vector<EvalReport>;
    for (Task task : {Task::kOffensive, Task::kHateSpeech}) {
      auto s = testing::MakeSyntheticSetup({.documents = 120, .seed = 2}, task);
      FoldPlan plan = MakeFolds(*s.corpus, 2);
      for (auto rep : {Representation::kPosS, Representation::kBow,
                       Representation::kMol, Representation::kBm}) {
        for (auto kind : {ClassifierKind::kNb, ClassifierKind::kSvm,
                          ClassifierKind::kMlp}) {
          CellSpec cell;
          cell.task = task;
          cell.representation = rep;
          cell.classifier.kind = kind;
          cell.classifier.svm.epochs = 10;
          cell.classifier.mlp.epochs = 5;
          cell.classifier.mlp.hidden_units = 8;
          reports_->push_back(
              CrossValidate(*s.corpus, plan, s.docs, cell, s.resources));
        }
      }
    }
  }
  static void TearDownTestSuite() { delete reports_; }
  static std::vector<EvalReport> *reports_;
};
std::vector<EvalReport> *ReportTest::reports_ = nullptr;

TEST_F(ReportTest, FullGridHasTwentyFourCells) {
  std::stringstream csv;
  WriteReportCsv(*reports_, csv);
  const auto rows = ParseReportCsv(csv);
  size_t avg_pooled = 0;
  for (const auto &r : rows) {
    if (r.cls == "avg" && r.fold == "pooled") ++avg_pooled;
  }
  EXPECT_EQ(avg_pooled, 24u);
  // 3 classes x (pooled + 2 folds) per cell.
  EXPECT_EQ(rows.size(), 24u * 9);
}

TEST_F(ReportTest, CsvRoundTripsExactly) {
  std::stringstream csv;
  WriteReportCsv(*reports_, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "task,representation,selector,classifier,class,precision,recall,f1,"
            "fold");
  std::vector<ReportRow> want;
  for (const auto &r : *reports_) {
    auto rows = ReportRows(r);
    want.insert(want.end(), rows.begin(), rows.end());
  }
  EXPECT_EQ(ParseReportCsv(csv), want);
  EXPECT_EQ(want.front().fold, "pooled");
  EXPECT_EQ(want.front().task, "offensive");
  EXPECT_EQ(want.front().representation, "POS+S");
}

TEST_F(ReportTest, TextTableAndComparison) {
  std::vector<ExternalBaseline> baselines = {
      {"Other system", "Other dataset", Task::kOffensive, 0.75}};
  std::stringstream out;
  RenderReportText(*reports_, baselines, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("Feature selection: none"), std::string::npos);
  EXPECT_NE(text.find("B+M"), std::string::npos);
  EXPECT_NE(text.find("Avg"), std::string::npos);
  EXPECT_NE(text.find("MLP"), std::string::npos);
  EXPECT_NE(text.find("Other system"), std::string::npos);
  EXPECT_NE(text.find("0.75"), std::string::npos);
  EXPECT_NE(text.find("non-comparable"), std::string::npos);
}

TEST(ReportCsvTest, MalformedInputIsRejected) {
  std::stringstream bad("task,representation\noffensive,BOW\n");
  EXPECT_TRUE(CodeOf([&] { ParseReportCsv(bad); }).has_value());
}

}  // namespace
}  // namespace offlex
