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

#include "offlex/select.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "offlex/csv.h"
#include "offlex/error.h"
#include "offlex/random.h"
#include "strings.h"

namespace offlex {

std::string_view SelectionMethodName(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kNone: return "none";
    case SelectionMethod::kInfoGain: return "infogain";
    case SelectionMethod::kCfs: return "cfs";
  }
  return "";
}

SelectionMethod ParseSelectionMethod(std::string_view name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(c)));
  if (n == "none") return SelectionMethod::kNone;
  if (n == "infogain" || n == "ig") return SelectionMethod::kInfoGain;
  if (n == "cfs") return SelectionMethod::kCfs;
  throw Error(ErrorCode::kUsage, "unknown selector '" + std::string(name) +
                                     "' (valid: none, infogain, cfs)");
}

bool SelectionResult::Keeps(FeatureId id) const {
  return std::binary_search(kept.begin(), kept.end(), id);
}

namespace {

void CheckLabels(size_t num_vectors, std::span<const int> labels) {
  if (num_vectors != labels.size()) {
    throw Error(ErrorCode::kIdMismatch, "vector and label counts differ");
  }
  size_t positives = std::count(labels.begin(), labels.end(), 1);
  if (labels.size() < 2 || positives == 0 || positives == labels.size()) {
    throw Error(ErrorCode::kSingleClass,
                "feature selection needs both classes present");
  }
}

void CheckIds(std::span<const FeatureVector> vectors, size_t num_features) {
  for (const FeatureVector &v : vectors) {
    if (!v.entries.empty() &&
        static_cast<size_t>(v.entries.back().id) >= num_features) {
      throw Error(ErrorCode::kVocabularyMismatch,
                  "vector '" + v.doc_id + "' has a feature id outside the "
                  "vocabulary");
    }
  }
}

// Binary entropy in bits of a two-way split with the given counts.
double Entropy2(double a, double b) {
  const double n = a + b;
  if (n <= 0) return 0.0;
  double h = 0.0;
  for (double c : {a, b}) {
    if (c > 0) h -= (c / n) * std::log2(c / n);
  }
  return h;
}

}  // namespace

std::vector<double> InfoGain(std::span<const FeatureVector> vectors,
                             std::span<const int> labels,
                             size_t num_features) {
  CheckLabels(vectors.size(), labels);
  CheckIds(vectors, num_features);
  std::vector<size_t> present_pos(num_features, 0);
  std::vector<size_t> present_neg(num_features, 0);
  size_t pos = 0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    const bool positive = labels[i] == 1;
    pos += positive;
    for (const FeatureEntry &e : vectors[i].entries) {
      if (e.weight > 0) ++(positive ? present_pos : present_neg)[e.id];
    }
  }
  const double n = static_cast<double>(vectors.size());
  const double neg = n - pos;
  const double h_y = Entropy2(pos, neg);
  std::vector<double> gains(num_features, 0.0);
  for (size_t f = 0; f < num_features; ++f) {
    const double pp = present_pos[f];
    const double pn = present_neg[f];
    const double ap = pos - pp;
    const double an = neg - pn;
    const double h_cond =
        ((pp + pn) / n) * Entropy2(pp, pn) + ((ap + an) / n) * Entropy2(ap, an);
    gains[f] = std::max(0.0, h_y - h_cond);
  }
  return gains;
}

SelectionResult InfoGainSelect(std::span<const FeatureVector> vectors,
                               std::span<const int> labels,
                               size_t num_features,
                               std::optional<size_t> top_k) {
  SelectionResult result;
  result.method = SelectionMethod::kInfoGain;
  result.vocabulary_size = num_features;
  result.scores = InfoGain(vectors, labels, num_features);
  if (top_k) {
    std::vector<FeatureId> order(num_features);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](FeatureId a, FeatureId b) {
      return result.scores[a] > result.scores[b];
    });
    order.resize(std::min(*top_k, order.size()));
    std::sort(order.begin(), order.end());
    result.kept = std::move(order);
  } else {
    for (size_t f = 0; f < num_features; ++f) {
      if (result.scores[f] > kMinInfoGain) {
        result.kept.push_back(static_cast<FeatureId>(f));
      }
    }
  }
  return result;
}

double CfsMerit(size_t k, double mean_rcf, double mean_rff) {
  if (k == 0) return 0.0;
  const double kd = static_cast<double>(k);
  return kd * mean_rcf / std::sqrt(kd + kd * (kd - 1) * mean_rff);
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n == 0 || y.size() != n) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Column-major view of the training matrix for correlation work.
class CorrelationCache {
 public:
  CorrelationCache(std::span<const FeatureVector> vectors,
                   std::span<const int> labels, size_t num_features)
      : vectors_(vectors),
        n_(static_cast<double>(vectors.size())),
        columns_(num_features),
        mean_(num_features, 0.0),
        sd_(num_features, 0.0) {
    for (size_t i = 0; i < vectors.size(); ++i) {
      for (const FeatureEntry &e : vectors[i].entries) {
        columns_[e.id].push_back({static_cast<uint32_t>(i), e.weight});
      }
    }
    double sum_y = 0;
    for (int y : labels) sum_y += y;
    const double mean_y = sum_y / n_;
    const double sd_y = std::sqrt(std::max(0.0, mean_y - mean_y * mean_y));
    for (size_t f = 0; f < num_features; ++f) {
      double s = 0, ss = 0, sy = 0;
      for (const Cell &c : columns_[f]) {
        s += c.value;
        ss += c.value * c.value;
        sy += c.value * labels[c.row];
      }
      mean_[f] = s / n_;
      // Centered sum of squares, guarded against cancellation.
      double centered = ss - s * s / n_;
      if (centered <= 1e-12 * std::max(1.0, ss)) centered = 0.0;
      sd_[f] = std::sqrt(centered / n_);
      if (sd_[f] > 0 && sd_y > 0) {
        double cov = sy / n_ - mean_[f] * mean_y;
        class_corr_.push_back(std::clamp(cov / (sd_[f] * sd_y), -1.0, 1.0));
      } else {
        class_corr_.push_back(0.0);
      }
    }
  }

  bool HasVariance(size_t f) const { return sd_[f] > 0; }
  double ClassCorrelation(size_t f) const { return class_corr_[f]; }

  // |r(g, f)| for every feature f, computed once per g from the documents
  // that contain g.
  const std::vector<double> &AbsCorrelationRow(FeatureId g) {
    auto it = rows_.find(g);
    if (it != rows_.end()) return it->second;
    std::vector<double> dot(columns_.size(), 0.0);
    for (const Cell &c : columns_[g]) {
      for (const FeatureEntry &e : vectors_[c.row].entries) {
        dot[e.id] += c.value * e.weight;
      }
    }
    std::vector<double> row(columns_.size(), 0.0);
    for (size_t f = 0; f < row.size(); ++f) {
      if (sd_[f] == 0 || sd_[g] == 0) continue;
      const double cov = dot[f] / n_ - mean_[g] * mean_[f];
      row[f] = std::abs(std::clamp(cov / (sd_[g] * sd_[f]), -1.0, 1.0));
    }
    return rows_.emplace(g, std::move(row)).first->second;
  }

 private:
  struct Cell {
    uint32_t row;
    double value;
  };
  std::span<const FeatureVector> vectors_;
  double n_;
  std::vector<std::vector<Cell>> columns_;
  std::vector<double> mean_;
  std::vector<double> sd_;
  std::vector<double> class_corr_;
  std::unordered_map<FeatureId, std::vector<double>> rows_;
};

// Search node: a subset stored as its parent plus one feature.
struct Node {
  std::shared_ptr<const Node> parent;
  FeatureId added = -1;
  size_t size = 0;
  double sum_rcf = 0.0;  // sum of |r(f, class)|
  double sum_rff = 0.0;  // sum over unordered pairs of |r(f, g)|
  double merit = 0.0;
  uint64_t hash = 0;     // xor of per-feature keys
  uint64_t sequence = 0; // creation order
  // For expanded nodes: sum of |r(g, f)| over members g, for every f.
  mutable std::shared_ptr<const std::vector<double>> member_corr;

  std::vector<FeatureId> Features() const {
    std::vector<FeatureId> out;
    for (const Node *n = this; n && n->added >= 0; n = n->parent.get()) {
      out.push_back(n->added);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};
using NodePtr = std::shared_ptr<const Node>;

double SubsetMerit(size_t k, double sum_rcf, double sum_rff) {
  if (k == 0) return 0.0;
  const double pairs = k * (k - 1) / 2.0;
  return CfsMerit(k, sum_rcf / k, pairs > 0 ? sum_rff / pairs : 0.0);
}

// Highest merit first; equal merits go to the smaller, then the earlier
// created subset, so the search is reproducible.
bool Precedes(const Node &a, const Node &b) {
  if (a.merit != b.merit) return a.merit > b.merit;
  if (a.size != b.size) return a.size < b.size;
  return a.sequence < b.sequence;
}

struct OpenOrder {
  bool operator()(const NodePtr &a, const NodePtr &b) const {
    return Precedes(*a, *b);
  }
};

}  // namespace

SelectionResult CfsSelect(std::span<const FeatureVector> vectors,
                          std::span<const int> labels, size_t num_features,
                          const CfsOptions &options) {
  CheckLabels(vectors.size(), labels);
  CheckIds(vectors, num_features);
  CorrelationCache corr(vectors, labels, num_features);

  std::vector<FeatureId> candidates;
  for (size_t f = 0; f < num_features; ++f) {
    if (corr.HasVariance(f)) candidates.push_back(static_cast<FeatureId>(f));
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoVariance, "every feature is constant");
  }

  SelectionResult result;
  result.method = SelectionMethod::kCfs;
  result.vocabulary_size = num_features;
  result.scores.assign(num_features, 0.0);
  for (FeatureId f : candidates) {
    result.scores[f] = std::abs(corr.ClassCorrelation(f));
  }

  // Visited subsets are tracked by a 64-bit Zobrist hash of their members.
  std::vector<uint64_t> keys(num_features);
  Rng key_rng(0x5EEDCF5);
  for (uint64_t &k : keys) k = key_rng.Next();

  std::set<NodePtr, OpenOrder> open;
  std::unordered_set<uint64_t> visited;
  auto root = std::make_shared<Node>();
  root->member_corr =
      std::make_shared<const std::vector<double>>(num_features, 0.0);
  open.insert(root);
  visited.insert(0);
  NodePtr best = root;
  uint64_t sequence = 1;
  int stale = 0;

  constexpr double kImprovement = 1e-12;
  std::vector<char> in_head(num_features, 0);
  while (!open.empty() && stale < options.max_stale) {
    NodePtr head = *open.begin();
    open.erase(open.begin());
    if (!head->member_corr) {
      // The parent was expanded before this node was created.
      auto sums = std::make_shared<std::vector<double>>(*head->parent->member_corr);
      const std::vector<double> &row = corr.AbsCorrelationRow(head->added);
      for (size_t f = 0; f < num_features; ++f) (*sums)[f] += row[f];
      head->member_corr = std::move(sums);
    }
    const std::vector<double> &member_corr = *head->member_corr;
    const std::vector<FeatureId> members = head->Features();
    for (FeatureId g : members) in_head[g] = 1;

    bool improved = false;
    for (FeatureId f : candidates) {
      if (in_head[f]) continue;
      const uint64_t hash = head->hash ^ keys[f];
      if (!visited.insert(hash).second) continue;
      Node child;
      child.added = f;
      child.size = head->size + 1;
      child.sum_rcf = head->sum_rcf + result.scores[f];
      child.sum_rff = head->sum_rff + member_corr[f];
      child.merit = SubsetMerit(child.size, child.sum_rcf, child.sum_rff);
      child.hash = hash;
      child.sequence = sequence++;
      const bool is_best = child.merit > best->merit + kImprovement;
      // A full open list would drop the child straight away.
      if (!is_best && open.size() >= options.max_open &&
          !Precedes(child, **std::prev(open.end()))) {
        continue;
      }
      child.parent = head;
      auto node = std::make_shared<const Node>(std::move(child));
      if (is_best) {
        best = node;
        improved = true;
      }
      open.insert(std::move(node));
      if (open.size() > options.max_open) open.erase(std::prev(open.end()));
    }
    for (FeatureId g : members) in_head[g] = 0;
    stale = improved ? 0 : stale + 1;
  }

  result.kept = best->Features();
  result.merit = best->merit;
  return result;
}

SelectionResult SelectAll(size_t num_features) {
  SelectionResult result;
  result.method = SelectionMethod::kNone;
  result.vocabulary_size = num_features;
  result.kept.resize(num_features);
  std::iota(result.kept.begin(), result.kept.end(), 0);
  result.scores.assign(num_features, 0.0);
  return result;
}

std::vector<FeatureVector> ApplySelection(std::span<const FeatureVector> vectors,
                                          const SelectionResult &result,
                                          size_t vocabulary_size) {
  if (result.vocabulary_size != vocabulary_size) {
    throw Error(ErrorCode::kVocabularyMismatch,
                "selection was built for a vocabulary of " +
                    std::to_string(result.vocabulary_size) + " features, not " +
                    std::to_string(vocabulary_size));
  }
  CheckIds(vectors, vocabulary_size);
  std::vector<FeatureVector> out;
  out.reserve(vectors.size());
  for (const FeatureVector &v : vectors) {
    FeatureVector kept{v.doc_id, {}};
    for (const FeatureEntry &e : v.entries) {
      if (result.Keeps(e.id)) kept.entries.push_back(e);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

FeatureVector ProjectToKept(const FeatureVector &vector,
                            const SelectionResult &result) {
  FeatureVector out{vector.doc_id, {}};
  for (const FeatureEntry &e : vector.entries) {
    auto it = std::lower_bound(result.kept.begin(), result.kept.end(), e.id);
    if (it != result.kept.end() && *it == e.id) {
      out.entries.push_back(
          {static_cast<FeatureId>(it - result.kept.begin()), e.weight});
    }
  }
  return out;
}

void WriteSelectionCsv(const SelectionResult &result, const Vocabulary &vocab,
                       std::ostream &out) {
  if (vocab.size() != result.vocabulary_size) {
    throw Error(ErrorCode::kVocabularyMismatch,
                "selection and vocabulary sizes differ");
  }
  out << "feature_id,feature_name,score,kept\n";
  for (size_t f = 0; f < vocab.size(); ++f) {
    const FeatureId id = static_cast<FeatureId>(f);
    out << f << ',' << CsvEscape(vocab.Name(id)) << ','
        << internal::FormatDouble(result.scores.empty() ? 0.0 : result.scores[f])
        << ',' << (result.Keeps(id) ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Gain/loss

namespace {

using GridKey = std::tuple<Task, Representation, std::string>;

}  // namespace

GainLossReport BuildGainLossReport(std::span<const CellSummary> baseline,
                                   std::span<const CellSummary> selected) {
  std::map<GridKey, Prf> base;
  std::map<std::string, size_t> classifier_rank;
  for (const CellSummary &c : baseline) {
    if (c.selector != SelectionMethod::kNone) {
      throw Error(ErrorCode::kGridMismatch,
                  "baseline cell uses a feature selector");
    }
    if (!base.emplace(GridKey{c.task, c.representation, c.classifier}, c.avg)
             .second) {
      throw Error(ErrorCode::kGridMismatch, "duplicate baseline cell");
    }
    classifier_rank.emplace(c.classifier, classifier_rank.size());
  }

  std::map<SelectionMethod, std::map<GridKey, Prf>> by_method;
  for (const CellSummary &c : selected) {
    if (c.selector == SelectionMethod::kNone) {
      throw Error(ErrorCode::kGridMismatch, "selected cell has no selector");
    }
    GridKey key{c.task, c.representation, c.classifier};
    if (!base.contains(key)) {
      throw Error(ErrorCode::kGridMismatch,
                  "no baseline for " + std::string(TaskName(c.task)) + "/" +
                      std::string(RepresentationName(c.representation)) + "/" +
                      c.classifier);
    }
    if (!by_method[c.selector].emplace(key, c.avg).second) {
      throw Error(ErrorCode::kGridMismatch, "duplicate selected cell");
    }
  }
  for (const auto &[method, cells] : by_method) {
    if (cells.size() != base.size()) {
      throw Error(ErrorCode::kGridMismatch,
                  std::string(SelectionMethodName(method)) +
                      " does not cover the baseline grid");
    }
  }

  GainLossReport report;
  std::vector<Task> tasks;
  for (const auto &[key, prf] : base) {
    if (std::find(tasks.begin(), tasks.end(), std::get<0>(key)) == tasks.end()) {
      tasks.push_back(std::get<0>(key));
    }
  }
  std::vector<std::string> classifiers(classifier_rank.size());
  for (const auto &[name, rank] : classifier_rank) classifiers[rank] = name;

  for (Task task : tasks) {
    for (const auto &[method, cells] : by_method) {
      Prf t2;
      std::map<std::string, Prf> per_classifier;
      for (Representation rep :
           {Representation::kPosS, Representation::kBow, Representation::kMol,
            Representation::kBm}) {
        Prf t1;
        bool any = false;
        for (const std::string &clf : classifiers) {
          GridKey key{task, rep, clf};
          auto it = cells.find(key);
          if (it == cells.end()) continue;
          any = true;
          Prf delta = it->second - base.at(key);
          report.rows.push_back({task, method, rep, clf, delta});
          t1 += delta;
          per_classifier[clf] += delta;
        }
        if (!any) continue;
        report.t1.push_back({task, method, rep, std::nullopt, t1});
        t2 += t1;
      }
      for (const std::string &clf : classifiers) {
        auto it = per_classifier.find(clf);
        if (it == per_classifier.end()) continue;
        report.classifier_sums.push_back(
            {task, method, std::nullopt, clf, it->second});
      }
      report.t2.push_back({task, method, std::nullopt, std::nullopt, t2});
    }
  }
  return report;
}

void WriteGainLossCsv(const GainLossReport &report, std::ostream &out) {
  using internal::FormatDouble;
  out << "task,selector,representation,classifier,kind,delta_precision,"
         "delta_recall,delta_f1\n";
  auto row = [&](Task task, SelectionMethod method, std::string_view rep,
                 std::string_view clf, std::string_view kind, const Prf &p) {
    out << TaskName(task) << ',' << SelectionMethodName(method) << ','
        << CsvEscape(rep) << ',' << CsvEscape(clf) << ',' << kind << ','
        << FormatDouble(p.precision) << ',' << FormatDouble(p.recall) << ','
        << FormatDouble(p.f1) << '\n';
  };
  for (const GainLossRow &r : report.rows) {
    row(r.task, r.method, RepresentationName(r.representation), r.classifier,
        "cell", r.delta);
  }
  for (const GainLossMargin &m : report.t1) {
    row(m.task, m.method, RepresentationName(*m.representation), "*", "T1",
        m.sum);
  }
  for (const GainLossMargin &m : report.classifier_sums) {
    row(m.task, m.method, "*", *m.classifier, "classifier_sum", m.sum);
  }
  for (const GainLossMargin &m : report.t2) {
    row(m.task, m.method, "*", "*", "T2", m.sum);
  }
}

void RenderGainLossText(const GainLossReport &report, std::ostream &out) {
  using internal::FormatFixed;
  std::vector<Task> tasks;
  std::vector<SelectionMethod> methods;
  std::vector<std::string> classifiers;
  for (const GainLossRow &r : report.rows) {
    if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) {
      tasks.push_back(r.task);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(classifiers.begin(), classifiers.end(), r.classifier) ==
        classifiers.end()) {
      classifiers.push_back(r.classifier);
    }
  }
  auto cell = [&](Task t, SelectionMethod m, Representation rep,
                  const std::string &clf) -> const Prf * {
    for (const GainLossRow &r : report.rows) {
      if (r.task == t && r.method == m && r.representation == rep &&
          r.classifier == clf) {
        return &r.delta;
      }
    }
    return nullptr;
  };
  auto margin = [](const std::vector<GainLossMargin> &v, Task t,
                   SelectionMethod m,
                   std::optional<Representation> rep) -> const Prf * {
    for (const GainLossMargin &g : v) {
      if (g.task == t && g.method == m && g.representation == rep) return &g.sum;
    }
    return nullptr;
  };
  auto pad = [](std::string s, size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  auto signed_fixed = [&](double v) {
    std::string s = FormatFixed(v, 2);
    if (s == "-0.00") s = "0.00";
    return s;
  };

  struct Measure {
    const char *name;
    double Prf::*field;
  };
  const Measure measures[] = {{"Precision", &Prf::precision},
                              {"Recall", &Prf::recall},
                              {"F1-Score", &Prf::f1}};
  for (const Measure &measure : measures) {
    out << measure.name << '\n';
    std::string header = pad("", 10) + pad("", 7);
    for (Task t : tasks) {
      header += "  |";
      header += pad(std::string(TaskName(t)), 9);
      for (const std::string &clf : classifiers) header += pad(clf, 7);
      header += pad("T1", 7) + pad("T2", 7);
    }
    out << header << '\n';
    for (SelectionMethod m : methods) {
      bool first = true;
      for (Representation rep :
           {Representation::kPosS, Representation::kBow, Representation::kMol,
            Representation::kBm}) {
        bool any = false;
        for (Task t : tasks) any |= margin(report.t1, t, m, rep) != nullptr;
        if (!any) continue;
        std::string line =
            pad(first ? std::string(SelectionMethodName(m)) : "", 10) +
            pad(std::string(RepresentationName(rep)), 7);
        for (Task t : tasks) {
          line += "  |" + pad("", 9);
          for (const std::string &clf : classifiers) {
            const Prf *p = cell(t, m, rep, clf);
            line += pad(p ? signed_fixed(p->*measure.field) : "-", 7);
          }
          const Prf *t1 = margin(report.t1, t, m, rep);
          line += pad(t1 ? signed_fixed(t1->*measure.field) : "-", 7);
          const Prf *t2 = margin(report.t2, t, m, std::nullopt);
          line += pad(first && t2 ? signed_fixed(t2->*measure.field) : "", 7);
        }
        out << line << '\n';
        first = false;
      }
    }
    out << '\n';
  }
}

}  // namespace offlex
