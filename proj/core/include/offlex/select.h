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

#ifndef OFFLEX_SELECT_H_
#define OFFLEX_SELECT_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/metrics.h"
#include "offlex/vectorize.h"

namespace offlex {

enum class SelectionMethod { kNone, kInfoGain, kCfs };

std::string_view SelectionMethodName(SelectionMethod method);  // none, ...
SelectionMethod ParseSelectionMethod(std::string_view name);

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kNone;
  size_t vocabulary_size = 0;
  std::vector<FeatureId> kept;  // ascending
  // Per-feature score: information gain in bits, or |Pearson(feature,
  // class)| for CFS (0 for features CFS could not score).
  std::vector<double> scores;
  // Merit of the kept subset (CFS only).
  double merit = 0.0;

  bool Keeps(FeatureId id) const;
  bool operator==(const SelectionResult &) const = default;
};

// Gains below this are treated as zero when applying the keep rule.
inline constexpr double kMinInfoGain = 1e-12;

// Information gain of each feature's presence/absence about the label, in
// bits: H(Y) - H(Y | feature present?). Throws SingleClass unless there are
// at least two documents and both labels occur.
std::vector<double> InfoGain(std::span<const FeatureVector> vectors,
                             std::span<const int> labels,
                             size_t num_features);

// Keeps every feature with positive gain, or with `top_k`, the k highest
// gains (ties to the lower id).
SelectionResult InfoGainSelect(std::span<const FeatureVector> vectors,
                               std::span<const int> labels,
                               size_t num_features,
                               std::optional<size_t> top_k = std::nullopt);

struct CfsOptions {
  // Consecutive non-improving expansions before the search stops.
  int max_stale = 5;
  // Open-list bound; the lowest-merit subsets are dropped beyond it.
  size_t max_open = 20000;
};

// Merit of a subset of k features: k*mean_rcf / sqrt(k + k(k-1)*mean_rff).
double CfsMerit(size_t k, double mean_rcf, double mean_rff);

// Pearson correlation between two columns given as dense vectors.
double Pearson(std::span<const double> x, std::span<const double> y);

// Correlation-based feature selection: best-first forward search over
// subsets maximizing CfsMerit with absolute Pearson correlations.
// Zero-variance features are never selected. Throws NoVariance when every
// feature is constant and SingleClass when the labels are.
SelectionResult CfsSelect(std::span<const FeatureVector> vectors,
                          std::span<const int> labels, size_t num_features,
                          const CfsOptions &options = {});

// Keeps everything.
SelectionResult SelectAll(size_t num_features);

// Drops entries outside result.kept; ids and document ids are unchanged.
// Throws VocabularyMismatch when the result was built for another
// vocabulary size or a vector carries an out-of-range id.
std::vector<FeatureVector> ApplySelection(std::span<const FeatureVector> vectors,
                                          const SelectionResult &result,
                                          size_t vocabulary_size);

// Maps kept features onto compact ids 0..kept.size()-1 (in kept order) and
// drops the rest.
FeatureVector ProjectToKept(const FeatureVector &vector,
                            const SelectionResult &result);

// `feature_id,feature_name,score,kept`.
void WriteSelectionCsv(const SelectionResult &result, const Vocabulary &vocab,
                       std::ostream &out);

// Headline (Avg) metrics of one experiment cell.
struct CellSummary {
  Task task = Task::kOffensive;
  Representation representation = Representation::kBow;
  SelectionMethod selector = SelectionMethod::kNone;
  std::string classifier;
  Prf avg;
};

struct GainLossRow {
  Task task;
  SelectionMethod method;
  Representation representation;
  std::string classifier;
  Prf delta;  // selected minus baseline
};

struct GainLossMargin {
  Task task;
  SelectionMethod method;
  // Set for per-representation sums (T1) and per-classifier sums.
  std::optional<Representation> representation;
  std::optional<std::string> classifier;
  Prf sum;
};

// Gain/loss of each selector against the unselected baseline.
//   T1: per (task, selector, representation), summed over classifiers.
//   classifier sums: per (task, selector, classifier), over representations.
//   T2: per (task, selector), the sum of its T1 values.
struct GainLossReport {
  std::vector<GainLossRow> rows;
  std::vector<GainLossMargin> t1;
  std::vector<GainLossMargin> classifier_sums;
  std::vector<GainLossMargin> t2;
};

// `baseline` holds cells without selection; `selected` holds cells of one or
// more selectors, each covering exactly the baseline grid. Throws
// GridMismatch otherwise.
GainLossReport BuildGainLossReport(std::span<const CellSummary> baseline,
                                   std::span<const CellSummary> selected);

void WriteGainLossCsv(const GainLossReport &report, std::ostream &out);

// Aligned table: one block per measure, rows selector x representation,
// columns per task: classifiers, T1, T2.
void RenderGainLossText(const GainLossReport &report, std::ostream &out);

}  // namespace offlex

#endif  // OFFLEX_SELECT_H_
