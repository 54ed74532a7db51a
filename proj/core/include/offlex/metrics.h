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

#ifndef OFFLEX_METRICS_H_
#define OFFLEX_METRICS_H_

#include <cstddef>

namespace offlex {

// Counts for the positive class (label 1).
struct ConfusionMatrix {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t tn = 0;

  size_t total() const { return tp + fp + fn + tn; }
  // The same matrix seen from class 0 as the positive class.
  ConfusionMatrix Swapped() const { return {tn, fn, fp, tp}; }

  ConfusionMatrix &operator+=(const ConfusionMatrix &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionMatrix &) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  Prf &operator+=(const Prf &o) {
    precision += o.precision;
    recall += o.recall;
    f1 += o.f1;
    return *this;
  }
  bool operator==(const Prf &) const = default;
};

inline Prf operator-(const Prf &a, const Prf &b) {
  return {a.precision - b.precision, a.recall - b.recall, a.f1 - b.f1};
}

// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R); an empty denominator
// yields 0.
Prf PositiveClassMetrics(const ConfusionMatrix &cm);

// Per-class rows and their arithmetic mean ("Avg").
struct MetricsTable {
  Prf per_class[2];
  Prf avg;

  bool operator==(const MetricsTable &) const = default;
};

MetricsTable ComputeMetrics(const ConfusionMatrix &cm);

}  // namespace offlex

#endif  // OFFLEX_METRICS_H_
