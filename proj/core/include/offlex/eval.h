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

#ifndef OFFLEX_EVAL_H_
#define OFFLEX_EVAL_H_

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/learn.h"
#include "offlex/lexicon.h"
#include "offlex/metrics.h"
#include "offlex/select.h"
#include "offlex/textprep.h"
#include "offlex/vectorize.h"

namespace offlex {

// Compares predictions with gold labels for the positive class 1. Throws
// IdMismatch unless both sides cover the same documents exactly once.
ConfusionMatrix Score(std::span<const Prediction> predictions,
                      const std::map<std::string, int> &gold);

struct SelectorSpec {
  SelectionMethod method = SelectionMethod::kNone;
  std::optional<size_t> infogain_top_k;
  CfsOptions cfs;
};

// Lexicons shared by every cell; not owned.
struct Resources {
  const MolLexicon *mol = nullptr;
  const PolarityLexicon *sentiment = nullptr;
  const EmotionLexicon *emotion = nullptr;
};

struct CellSpec {
  Task task = Task::kOffensive;
  Representation representation = Representation::kBow;
  SelectorSpec selector;
  ClassifierSpec classifier;
};

// Vocabulary, weighting and selection fitted on one training set.
class FeaturePipeline {
 public:
  // Builds the vocabulary from `train` only, vectorizes it and runs the
  // selector on those vectors. Throws MissingLexicon when the
  // representation needs MOL and none is given.
  static FeaturePipeline Fit(std::span<const TokenizedDocument> train,
                             std::span<const int> labels, Task task,
                             Representation representation,
                             const SelectorSpec &selector,
                             const Resources &resources);

  // Rebuilds a fitted pipeline from its saved parts.
  FeaturePipeline(Task task, Representation representation,
                  Vocabulary vocabulary, SelectionResult selection,
                  const Resources &resources);

  Task task() const { return task_; }
  Representation representation() const { return representation_; }
  const Vocabulary &vocabulary() const { return *vocabulary_; }
  const SelectionResult &selection() const { return selection_; }
  const WeightingParams &weighting() const { return weighting_; }
  // Multipliers of the B+M representation; empty for the others.
  const std::vector<double> &bm_factors() const;

  // Vector over the full vocabulary.
  FeatureVector VectorizeFull(const TokenizedDocument &doc) const;
  // Vector over the kept features, with compact ids.
  FeatureVector Transform(const TokenizedDocument &doc) const;
  size_t num_inputs() const { return selection_.kept.size(); }

 private:
  FeaturePipeline() = default;
  void Init(const Resources &resources);

  Task task_ = Task::kOffensive;
  Representation representation_ = Representation::kBow;
  std::shared_ptr<const Vocabulary> vocabulary_;
  SelectionResult selection_;
  WeightingParams weighting_;
  Resources resources_;
  std::shared_ptr<const BmWeighter> bm_;
};

// Vectors of the training fold, as the observer sees them.
struct FoldObservation {
  int fold = 0;
  const FeaturePipeline *pipeline = nullptr;
  std::span<const TokenizedDocument> train;
  std::span<const TokenizedDocument> test;
};
using FoldObserver = std::function<void(const FoldObservation &)>;

struct EvalReport {
  Task task = Task::kOffensive;
  Representation representation = Representation::kBow;
  SelectionMethod selector = SelectionMethod::kNone;
  std::string classifier;

  std::vector<ConfusionMatrix> folds;
  ConfusionMatrix pooled;       // sum of `folds`
  MetricsTable metrics;         // from `pooled`
  std::vector<MetricsTable> fold_metrics;

  CellSummary Summary() const;
};

// Trains on `train`, predicts `test`.
struct FoldResult {
  FeaturePipeline pipeline;
  Classifier model;
  std::vector<Prediction> predictions;
};
FoldResult RunFold(std::span<const TokenizedDocument> train,
                   std::span<const int> train_labels,
                   std::span<const TokenizedDocument> test,
                   const CellSpec &cell, const Resources &resources);

// k-fold cross-validation of one cell. `docs[i]` is the tokenized form of
// corpus[i]; vocabulary, selection and training see the training folds only.
EvalReport CrossValidate(const Corpus &corpus, const FoldPlan &plan,
                         std::span<const TokenizedDocument> docs,
                         const CellSpec &cell, const Resources &resources,
                         const FoldObserver &observer = {});

// One line of the results CSV.
struct ReportRow {
  std::string task;
  std::string representation;
  std::string selector;
  std::string classifier;
  std::string cls;   // "0", "1" or "avg"
  Prf prf;
  std::string fold;  // fold index or "pooled"

  bool operator==(const ReportRow &) const = default;
};

std::vector<ReportRow> ReportRows(const EvalReport &report);
// `task,representation,selector,classifier,class,precision,recall,f1,fold`
void WriteReportCsv(std::span<const EvalReport> reports, std::ostream &out);
std::vector<ReportRow> ParseReportCsv(std::istream &in);

// Published figure from another study, shown for context only.
struct ExternalBaseline {
  std::string name;
  std::string dataset;
  Task task = Task::kOffensive;
  double f1 = 0.0;
};

// Aligned tables with 2 decimals: one per selector, rows task x
// representation x class, columns metric x classifier; then a comparison of
// the best Avg F1 per task against the external baselines.
void RenderReportText(std::span<const EvalReport> reports,
                      std::span<const ExternalBaseline> baselines,
                      std::ostream &out);

}  // namespace offlex

#endif  // OFFLEX_EVAL_H_
