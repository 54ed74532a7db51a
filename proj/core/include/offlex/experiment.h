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

#ifndef OFFLEX_EXPERIMENT_H_
#define OFFLEX_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/eval.h"
#include "offlex/learn.h"
#include "offlex/select.h"
#include "offlex/textprep.h"
#include "offlex/vectorize.h"

namespace offlex {

// Everything a `prepare` / `run` / `select-report` invocation needs. Loaded
// from a JSON file (see data/example_config.json); relative paths are
// resolved against the file's directory.
struct ExperimentConfig {
  std::filesystem::path corpus;
  CorpusFormat format = CorpusFormat::kCsv;
  CorpusSchema schema;

  std::optional<std::filesystem::path> mol;
  std::optional<std::filesystem::path> sentiment;
  std::optional<std::filesystem::path> emotion;
  std::optional<std::filesystem::path> stopwords;  // bundled list if unset
  std::optional<std::filesystem::path> lemmas;
  std::vector<Step> steps;  // default pipeline if empty

  std::vector<Task> tasks = {Task::kOffensive, Task::kHateSpeech};
  std::vector<Representation> representations = {
      Representation::kPosS, Representation::kBow, Representation::kMol,
      Representation::kBm};
  std::vector<SelectionMethod> selectors = {SelectionMethod::kNone};
  std::vector<ClassifierKind> classifiers = {
      ClassifierKind::kNb, ClassifierKind::kSvm, ClassifierKind::kMlp};

  int folds = 10;
  uint64_t seed = 0;
  int jobs = 0;  // 0: available parallelism
  std::filesystem::path out = "offlex-out";
  bool undersample = true;      // balance the hate task
  bool offensive_only = true;   // hate task draws from offensive comments
  bool save_models = true;

  NbParams nb;
  SvmParams svm;
  MlpParams mlp;
  std::optional<size_t> infogain_top_k;
  CfsOptions cfs;
  std::vector<ExternalBaseline> baselines;
};

ExperimentConfig LoadConfig(const std::filesystem::path &path);
ExperimentConfig ParseConfig(const std::string &json_text,
                             const std::filesystem::path &base_dir);

// Values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> task;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::filesystem::path> out;
};

// Reads OFFLEX_TASK, OFFLEX_SEED, OFFLEX_JOBS and OFFLEX_OUT through
// `getenv` (injectable for tests).
Overrides OverridesFromEnvironment(
    const std::function<const char *(const char *)> &getenv);

// Applies env then flag overrides; a flag wins over the environment.
void ApplyOverrides(const Overrides &overrides, ExperimentConfig *config);

// Checks paths, names and representation requirements. Throws
// ConfigInvalid listing every problem.
void ValidateConfig(const ExperimentConfig &config);

// Writes prepared/corpus.jsonl and logs/prepare.log. Returns the exit code.
int CmdPrepare(const ExperimentConfig &config, std::ostream &log);

// Runs the experiment grid and writes reports/ and models/. Returns 0 when
// every cell succeeded, 1 otherwise.
int CmdRun(const ExperimentConfig &config, std::ostream &log);

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path input;
  std::filesystem::path output;
  CorpusFormat format = CorpusFormat::kCsv;
  CorpusSchema schema{"id", "text", "", "", ""};
};

// Writes `doc_id,class,score,explanation`. Throws ModelVersionMismatch for
// files from another format version.
int CmdPredict(const PredictOptions &options, std::ostream &log);

// Per-feature selection scores over each task corpus and, when
// reports/results.csv exists, the gain/loss tables built from it.
int CmdSelectReport(const ExperimentConfig &config, std::ostream &log);

// Self-contained model file: preprocessing, lexicons, vocabulary, selection
// and classifier.
struct ModelBundle {
  Task task = Task::kOffensive;
  Representation representation = Representation::kBow;
  PipelineConfig pipeline;
  MolLexicon mol;
  PolarityLexicon sentiment;
  EmotionLexicon emotion;
  Vocabulary vocabulary;
  SelectionResult selection;
  Classifier classifier;
};

std::string SerializeBundle(const ModelBundle &bundle);
ModelBundle DeserializeBundle(const std::string &text);

// File-name friendly token for a representation ("bm" for "B+M").
std::string RepresentationSlug(Representation rep);

}  // namespace offlex

#endif  // OFFLEX_EXPERIMENT_H_
