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


#include "offlex/experiment.h"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "offlex/csv.h"
#include "test_util.h"

namespace offlex {
namespace {

namespace fs = std::filesystem;
using testing::CodeOf;
using testing::ReadText;
using testing::TempDir;
using testing::WriteText;

// 20 comments: offensive ones use "vadia" or "idiota", hate ones also
// "nojenta".
std::string SmallCorpusCsv() {
  std::string csv = "id,text,offensive,hate\n";
  const char *clean[] = {"bom dia para todos", "que jogo bonito hoje",
                         "gostei muito do discurso", "parabens pelo trabalho",
                         "a reforma precisa de debate"};
  const char *off[] = {"que vadia mentirosa", "esse idiota de novo",
                       "idiota sem vergonha", "vadia nojenta",
                       "politico idiota e nojento"};
  for (int i = 0; i < 20; ++i) {
    const bool is_off = i % 2 == 1;
    const bool is_hate = is_off && i % 4 == 1;
    std::string text = is_off ? off[(i / 2) % 5] : clean[(i / 2) % 5];
    if (is_hate) text += " nojenta";
    csv += "c" + std::to_string(i) + "," + text + "," + (is_off ? "1" : "0") +
           "," + (is_hate ? "1" : "0") + "\n";
  }
  return csv;
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    WriteText(dir_ / "corpus.csv", SmallCorpusCsv());
    WriteText(dir_ / "mol.tsv",
              "expression\tcontext\thate_marker\n"
              "vadia\tindependent\t1\n"
              "idiota\tdependent\t0\n"
              "sem vergonha\tindependent\t0\n");
  }

  std::string MinimalConfig(const std::string &extra = "") const {
    return R"({
      // smallest useful grid
      "corpus": {"path": "corpus.csv"},
      "lexicons": {"mol": "mol.tsv"},
      "tasks": ["offensive"],
      "representations": ["BOW"],
      "classifiers": ["NB"],
      "folds": 2,
      "jobs": 1,
      "out": "out")" + extra + "\n}";
  }

  ExperimentConfig Parse(const std::string &text) const {
    return ParseConfig(text, dir_.path());
  }

  TempDir dir_;
};

TEST_F(ExperimentTest, ParsesConfigAndResolvesPaths) {
  ExperimentConfig c = Parse(MinimalConfig(R"(,
      "selectors": ["none", "infogain"],
      "svm": {"lambda": 0.001},
      "mlp": {"hidden_units": 10},
      "infogain": {"top_k": 50},
      "baselines": [{"name": "X", "dataset": "Y", "task": "offensive", "f1": 0.7}])"));
  EXPECT_EQ(c.corpus, dir_ / "corpus.csv");
  EXPECT_EQ(*c.mol, dir_ / "mol.tsv");
  EXPECT_EQ(c.out, dir_ / "out");
  EXPECT_EQ(c.tasks, std::vector<Task>{Task::kOffensive});
  EXPECT_EQ(c.representations, std::vector<Representation>{Representation::kBow});
  EXPECT_EQ(c.selectors.size(), 2u);
  EXPECT_EQ(c.folds, 2);
  EXPECT_EQ(c.svm.lambda, 0.001);
  EXPECT_EQ(c.mlp.hidden_units, 10);
  EXPECT_EQ(c.mlp.learning_rate, 0.01);
  EXPECT_EQ(*c.infogain_top_k, 50u);
  ASSERT_EQ(c.baselines.size(), 1u);
  EXPECT_EQ(c.baselines[0].f1, 0.7);
  EXPECT_EQ(c.schema.text, "text");
}

TEST_F(ExperimentTest, SchemaPairs) {
  ExperimentConfig c = Parse(R"({"corpus": {"path": "x.csv",
      "schema": ["id:cid", "text:comment", "offensive:label", "hate:hs"]}})");
  EXPECT_EQ(c.schema.id, "cid");
  EXPECT_EQ(c.schema.text, "comment");
  EXPECT_EQ(c.schema.hate, "hs");
  EXPECT_EQ(c.schema.pos, "");
}

TEST_F(ExperimentTest, RejectsUnknownKeysAndNames) {
  EXPECT_EQ(CodeOf([&] { Parse(R"({"corpus": {"path": "a"}, "fold": 3})"); }),
            ErrorCode::kConfigInvalid);
  EXPECT_EQ(CodeOf([&] { Parse(R"({"corpus": {"path": "a"}, "mlp": {"lr": 1}})"); }),
            ErrorCode::kConfigInvalid);
  EXPECT_TRUE(CodeOf([&] { Parse("{not json"); }).has_value());
  try {
    Parse(R"({"corpus": {"path": "a"}, "classifiers": ["RF"]})");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
    const std::string what = e.what();
    for (const char *name : {"NB", "SVM", "MLP"}) {
      EXPECT_NE(what.find(name), std::string::npos) << name;
    }
  }
}

TEST_F(ExperimentTest, FlagsWinOverEnvironment) {
  std::map<std::string, std::string> env = {
      {"OFFLEX_TASK", "hate"}, {"OFFLEX_SEED", "9"}, {"OFFLEX_OUT", "/env"}};
  Overrides from_env = OverridesFromEnvironment([&](const char *k) -> const char * {
    auto it = env.find(k);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(*from_env.task, "hate");
  EXPECT_EQ(*from_env.seed, 9u);
  EXPECT_FALSE(from_env.jobs.has_value());

  ExperimentConfig c = Parse(MinimalConfig());
  ApplyOverrides(from_env, &c);
  Overrides flags;
  flags.seed = 3;
  ApplyOverrides(flags, &c);
  EXPECT_EQ(c.tasks, std::vector<Task>{Task::kHateSpeech});
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.out, fs::path("/env"));

  flags.task = "all";
  ApplyOverrides(flags, &c);
  EXPECT_EQ(c.tasks.size(), 2u);

  env["OFFLEX_JOBS"] = "many";
  EXPECT_TRUE(CodeOf([&] {
                OverridesFromEnvironment([&](const char *k) -> const char * {
                  auto it = env.find(k);
                  return it == env.end() ? nullptr : it->second.c_str();
                });
              }).has_value());
}

TEST_F(ExperimentTest, ValidationListsEveryProblem) {
  ExperimentConfig c = Parse(MinimalConfig(R"(,
      "representations": ["POS+S", "MOL"])"));
  c.mol.reset();
  c.stopwords = dir_ / "missing.txt";
  c.folds = 1;
  try {
    ValidateConfig(c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid);
    const std::string what = e.what();
    EXPECT_NE(what.find("missing.txt"), std::string::npos);
    EXPECT_NE(what.find("folds"), std::string::npos);
    EXPECT_NE(what.find("MOL needs"), std::string::npos);
    EXPECT_NE(what.find("POS+S"), std::string::npos);
  }
}

TEST_F(ExperimentTest, InvalidConfigLeavesNoOutput) {
  ExperimentConfig c = Parse(MinimalConfig(R"(,
      "lexicons": {"stopwords": "nope.txt"})"));
  std::ostringstream log;
  EXPECT_EQ(CodeOf([&] { CmdRun(c, log); }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(CodeOf([&] { CmdPrepare(c, log); }), ErrorCode::kConfigInvalid);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(ExperimentTest, PrepareIsDeterministic) {
  ExperimentConfig c = Parse(MinimalConfig());
  std::ostringstream log;
  ASSERT_EQ(CmdPrepare(c, log), 0);
  const std::string first = ReadText(dir_ / "out" / "prepared" / "corpus.jsonl");
  ASSERT_EQ(CmdPrepare(c, log), 0);
  EXPECT_EQ(ReadText(dir_ / "out" / "prepared" / "corpus.jsonl"), first);
  EXPECT_NE(first.find("\"vadia\""), std::string::npos);
  for (const char *sub : {"prepared", "models", "reports", "logs"}) {
    EXPECT_TRUE(fs::is_directory(dir_ / "out" / sub)) << sub;
  }
  const std::string plog = ReadText(dir_ / "out" / "logs" / "prepare.log");
  EXPECT_NE(plog.find("documents"), std::string::npos);
}

TEST_F(ExperimentTest, MinimalRunIsFast) {
  ExperimentConfig c = Parse(MinimalConfig());
  std::ostringstream log;
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(CmdRun(c, log), 0) << log.str();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 1.0);

  std::ifstream in(dir_ / "out" / "reports" / "results.csv");
  const auto rows = ParseReportCsv(in);
  size_t cells = 0;
  for (const auto &r : rows) {
    if (r.fold == "pooled" && r.cls == "avg") ++cells;
  }
  EXPECT_EQ(cells, 1u);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "reports" / "results.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "reports" / "folds_offensive.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "models" / "offensive_bow_none_NB.model"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "logs" / "run.log"));
}

class PredictTest : public ExperimentTest {
 protected:
  void SetUp() override {
    ExperimentTest::SetUp();
    ExperimentConfig c = Parse(MinimalConfig(R"(,
        "representations": ["B+M"])"));
    std::ostringstream log;
    ASSERT_EQ(CmdRun(c, log), 0) << log.str();
    options_.model = dir_ / "out" / "models" / "offensive_bm_none_NB.model";
  }

  std::vector<std::vector<std::string>> Run(const std::string &input) {
    WriteText(dir_ / "in.csv", input);
    options_.input = dir_ / "in.csv";
    options_.output = dir_ / "pred.csv";
    std::ostringstream log;
    EXPECT_EQ(CmdPredict(options_, log), 0);
    std::ifstream in(options_.output);
    DelimitedReader reader(in, ',', true);
    std::vector<std::vector<std::string>> rows;
    DelimitedRecord rec;
    while (reader.Next(&rec)) rows.push_back(rec.fields);
    return rows;
  }

  PredictOptions options_;
};

TEST_F(PredictTest, ExplainsLexiconTerms) {
  auto rows = Run("id,text\nq1,Que VADIA!\nq2,bom dia\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"doc_id", "class", "score",
                                               "explanation"}));
  EXPECT_EQ(rows[1][0], "q1");
  EXPECT_EQ(rows[1][3], "vadia:3");
  EXPECT_EQ(rows[2][3], "");
}

TEST_F(PredictTest, EmptyInputGivesEmptyOutput) {
  auto rows = Run("");
  EXPECT_TRUE(rows.empty());
  EXPECT_TRUE(fs::exists(options_.output));
  EXPECT_EQ(fs::file_size(options_.output), 0u);
}

TEST_F(PredictTest, SavedModelReproducesPredictions) {
  const std::string text = ReadText(options_.model);
  ModelBundle bundle = DeserializeBundle(text);
  EXPECT_EQ(SerializeBundle(bundle), text);
  auto first = Run("id,text\nq1,que vadia\nq2,idiota sem vergonha\nq3,bom dia\n");
  auto second = Run("id,text\nq1,que vadia\nq2,idiota sem vergonha\nq3,bom dia\n");
  EXPECT_EQ(first, second);
}

TEST_F(PredictTest, RejectsOtherFormatVersions) {
  std::string text = ReadText(options_.model);
  text.replace(0, text.find('\n'), "offlex-model 99");
  WriteText(dir_ / "old.model", text);
  options_.model = dir_ / "old.model";
  WriteText(dir_ / "in.csv", "id,text\nq1,x\n");
  options_.input = dir_ / "in.csv";
  options_.output = dir_ / "pred.csv";
  std::ostringstream log;
  EXPECT_EQ(CodeOf([&] { CmdPredict(options_, log); }),
            ErrorCode::kModelVersionMismatch);
}

}  // namespace
}  // namespace offlex
