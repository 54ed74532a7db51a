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
#include <charconv>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "offlex/csv.h"
#include "offlex/error.h"
#include "strings.h"

namespace offlex {

using internal::FormatDouble;
using internal::FormatFixed;

Prf PositiveClassMetrics(const ConfusionMatrix &cm) {
  Prf m;
  if (cm.tp + cm.fp > 0) {
    m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn > 0) {
    m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (m.precision + m.recall > 0) {
    m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

MetricsTable ComputeMetrics(const ConfusionMatrix &cm) {
  MetricsTable t;
  t.per_class[1] = PositiveClassMetrics(cm);
  t.per_class[0] = PositiveClassMetrics(cm.Swapped());
  t.avg.precision = (t.per_class[0].precision + t.per_class[1].precision) / 2;
  t.avg.recall = (t.per_class[0].recall + t.per_class[1].recall) / 2;
  t.avg.f1 = (t.per_class[0].f1 + t.per_class[1].f1) / 2;
  return t;
}

ConfusionMatrix Score(std::span<const Prediction> predictions,
                      const std::map<std::string, int> &gold) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kIdMismatch,
                std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(gold.size()) + " gold labels");
  }
  std::set<std::string_view> seen;
  ConfusionMatrix cm;
  for (const Prediction &p : predictions) {
    auto it = gold.find(p.doc_id);
    if (it == gold.end() || !seen.insert(p.doc_id).second) {
      throw Error(ErrorCode::kIdMismatch,
                  "prediction for unknown or repeated document '" + p.doc_id + "'");
    }
    const bool predicted = p.label == 1;
    const bool actual = it->second == 1;
    if (predicted && actual) ++cm.tp;
    else if (predicted) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

// ---------------------------------------------------------------------------
// FeaturePipeline

FeaturePipeline::FeaturePipeline(Task task, Representation representation,
                                 Vocabulary vocabulary,
                                 SelectionResult selection,
                                 const Resources &resources)
    : task_(task),
      representation_(representation),
      vocabulary_(std::make_shared<const Vocabulary>(std::move(vocabulary))),
      selection_(std::move(selection)) {
  if (selection_.vocabulary_size != vocabulary_->size()) {
    throw Error(ErrorCode::kVocabularyMismatch,
                "selection was built for " +
                    std::to_string(selection_.vocabulary_size) +
                    " features, vocabulary has " +
                    std::to_string(vocabulary_->size()));
  }
  Init(resources);
}

void FeaturePipeline::Init(const Resources &resources) {
  resources_ = resources;
  weighting_ = WeightingParams::ForTask(task_);
  const bool needs_mol = representation_ == Representation::kMol ||
                         representation_ == Representation::kBm;
  if (needs_mol && resources.mol == nullptr) {
    throw Error(ErrorCode::kMissingLexicon,
                std::string(RepresentationName(representation_)) +
                    " needs the MOL lexicon");
  }
  if (representation_ == Representation::kMol &&
      vocabulary_->size() != resources.mol->size()) {
    throw Error(ErrorCode::kVocabularyMismatch,
                "MOL vocabulary does not match the lexicon size");
  }
  if (representation_ == Representation::kBm) {
    bm_ = std::make_shared<const BmWeighter>(*vocabulary_, *resources.mol,
                                             weighting_);
  }
}

const std::vector<double> &FeaturePipeline::bm_factors() const {
  static const std::vector<double> kEmpty;
  return bm_ ? bm_->factors() : kEmpty;
}

FeaturePipeline FeaturePipeline::Fit(std::span<const TokenizedDocument> train,
                                     std::span<const int> labels, Task task,
                                     Representation representation,
                                     const SelectorSpec &selector,
                                     const Resources &resources) {
  FeaturePipeline p;
  p.task_ = task;
  p.representation_ = representation;
  switch (representation) {
    case Representation::kPosS:
      p.vocabulary_ = std::make_shared<const Vocabulary>(
          BuildVocabulary(train, VocabularySource::kPosAndSentiment));
      break;
    case Representation::kBow:
    case Representation::kBm:
      p.vocabulary_ = std::make_shared<const Vocabulary>(
          BuildVocabulary(train, VocabularySource::kCorpusTokens));
      break;
    case Representation::kMol:
      p.vocabulary_ = std::make_shared<const Vocabulary>(
          BuildVocabulary(train, VocabularySource::kMolTerms, resources.mol));
      break;
  }
  p.Init(resources);

  const size_t n = p.vocabulary_->size();
  switch (selector.method) {
    case SelectionMethod::kNone:
      p.selection_ = SelectAll(n);
      break;
    case SelectionMethod::kInfoGain:
    case SelectionMethod::kCfs: {
      std::vector<FeatureVector> vectors;
      vectors.reserve(train.size());
      for (const TokenizedDocument &d : train) vectors.push_back(p.VectorizeFull(d));
      p.selection_ =
          selector.method == SelectionMethod::kInfoGain
              ? InfoGainSelect(vectors, labels, n, selector.infogain_top_k)
              : CfsSelect(vectors, labels, n, selector.cfs);
      break;
    }
  }
  return p;
}

FeatureVector FeaturePipeline::VectorizeFull(const TokenizedDocument &doc) const {
  switch (representation_) {
    case Representation::kPosS:
      return VectorizePosS(doc, *vocabulary_, resources_.sentiment,
                           resources_.emotion);
    case Representation::kBow:
      return VectorizeBow(doc, *vocabulary_);
    case Representation::kMol:
      return VectorizeMol(doc, *resources_.mol, weighting_);
    case Representation::kBm:
      return bm_->Apply(doc);
  }
  return {};
}

FeatureVector FeaturePipeline::Transform(const TokenizedDocument &doc) const {
  return ProjectToKept(VectorizeFull(doc), selection_);
}

// ---------------------------------------------------------------------------
// Cross-validation

CellSummary EvalReport::Summary() const {
  return {task, representation, selector, classifier, metrics.avg};
}

FoldResult RunFold(std::span<const TokenizedDocument> train,
                   std::span<const int> train_labels,
                   std::span<const TokenizedDocument> test,
                   const CellSpec &cell, const Resources &resources) {
  FeaturePipeline pipeline =
      FeaturePipeline::Fit(train, train_labels, cell.task,
                           cell.representation, cell.selector, resources);
  std::vector<FeatureVector> train_vectors;
  train_vectors.reserve(train.size());
  for (const TokenizedDocument &d : train) {
    train_vectors.push_back(pipeline.Transform(d));
  }
  Classifier model = Train(cell.classifier, train_vectors, train_labels,
                           pipeline.num_inputs());
  std::vector<Prediction> predictions;
  predictions.reserve(test.size());
  for (const TokenizedDocument &d : test) {
    predictions.push_back(Predict(model, pipeline.Transform(d)));
  }
  return {std::move(pipeline), std::move(model), std::move(predictions)};
}

EvalReport CrossValidate(const Corpus &corpus, const FoldPlan &plan,
                         std::span<const TokenizedDocument> docs,
                         const CellSpec &cell, const Resources &resources,
                         const FoldObserver &observer) {
  if (docs.size() != corpus.size() || plan.size() != corpus.size()) {
    throw Error(ErrorCode::kIdMismatch,
                "corpus, fold plan and tokenized documents differ in size");
  }
  for (size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].id != corpus[i].id) {
      throw Error(ErrorCode::kIdMismatch,
                  "tokenized document '" + docs[i].id +
                      "' out of step with corpus document '" + corpus[i].id + "'");
    }
  }
  if (cell.task != corpus.task()) {
    throw Error(ErrorCode::kWrongTask, "cell task differs from the corpus task");
  }

  EvalReport report;
  report.task = cell.task;
  report.representation = cell.representation;
  report.selector = cell.selector.method;
  report.classifier = cell.classifier.Name();

  for (int fold = 0; fold < plan.k(); ++fold) {
    std::vector<TokenizedDocument> train, test;
    std::vector<int> train_labels;
    std::map<std::string, int> gold;
    for (size_t i : plan.TrainIndices(fold)) {
      train.push_back(docs[i]);
      train_labels.push_back(corpus.Label(i));
    }
    for (size_t i : plan.TestIndices(fold)) {
      test.push_back(docs[i]);
      gold.emplace(docs[i].id, corpus.Label(i));
    }
    CellSpec fold_cell = cell;
    fold_cell.classifier.svm.seed += static_cast<uint64_t>(fold);
    fold_cell.classifier.mlp.seed += static_cast<uint64_t>(fold);
    FoldResult result = RunFold(train, train_labels, test, fold_cell, resources);
    if (observer) observer({fold, &result.pipeline, train, test});
    ConfusionMatrix cm = Score(result.predictions, gold);
    report.folds.push_back(cm);
    report.fold_metrics.push_back(ComputeMetrics(cm));
    report.pooled += cm;
  }
  report.metrics = ComputeMetrics(report.pooled);
  return report;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

const char *const kClassNames[] = {"0", "1", "avg"};

void AppendRows(const EvalReport &r, const MetricsTable &t,
                const std::string &fold, std::vector<ReportRow> *rows) {
  const Prf values[] = {t.per_class[0], t.per_class[1], t.avg};
  for (int c = 0; c < 3; ++c) {
    rows->push_back({std::string(TaskName(r.task)),
                     std::string(RepresentationName(r.representation)),
                     std::string(SelectionMethodName(r.selector)), r.classifier,
                     kClassNames[c], values[c], fold});
  }
}

double ParseDouble(const std::string &s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformedRecord, "not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<ReportRow> ReportRows(const EvalReport &report) {
  std::vector<ReportRow> rows;
  AppendRows(report, report.metrics, "pooled", &rows);
  for (size_t f = 0; f < report.fold_metrics.size(); ++f) {
    AppendRows(report, report.fold_metrics[f], std::to_string(f), &rows);
  }
  return rows;
}

void WriteReportCsv(std::span<const EvalReport> reports, std::ostream &out) {
  out << "task,representation,selector,classifier,class,precision,recall,f1,fold\n";
  for (const EvalReport &r : reports) {
    for (const ReportRow &row : ReportRows(r)) {
      const std::vector<std::string> fields = {
          row.task, row.representation, row.selector, row.classifier, row.cls,
          FormatDouble(row.prf.precision), FormatDouble(row.prf.recall),
          FormatDouble(row.prf.f1), row.fold};
      WriteCsvRow(out, fields);
    }
  }
}

std::vector<ReportRow> ParseReportCsv(std::istream &in) {
  DelimitedReader reader(in, ',', true);
  DelimitedRecord rec;
  std::vector<ReportRow> rows;
  bool header = true;
  while (reader.Next(&rec)) {
    if (rec.fields.size() != 9) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "report line " + std::to_string(rec.line) + " has " +
                      std::to_string(rec.fields.size()) + " fields, expected 9");
    }
    if (header) {
      header = false;
      continue;
    }
    const auto &f = rec.fields;
    rows.push_back({f[0], f[1], f[2], f[3], f[4],
                    {ParseDouble(f[5]), ParseDouble(f[6]), ParseDouble(f[7])},
                    f[8]});
  }
  return rows;
}

void RenderReportText(std::span<const EvalReport> reports,
                      std::span<const ExternalBaseline> baselines,
                      std::ostream &out) {
  std::vector<std::string> classifiers;
  std::set<SelectionMethod> selectors;
  for (const EvalReport &r : reports) {
    if (std::find(classifiers.begin(), classifiers.end(), r.classifier) ==
        classifiers.end()) {
      classifiers.push_back(r.classifier);
    }
    selectors.insert(r.selector);
  }
  auto find = [&](Task t, Representation rep, SelectionMethod s,
                  const std::string &c) -> const EvalReport * {
    for (const EvalReport &r : reports) {
      if (r.task == t && r.representation == rep && r.selector == s &&
          r.classifier == c) {
        return &r;
      }
    }
    return nullptr;
  };
  const Task kTasks[] = {Task::kOffensive, Task::kHateSpeech};
  const Representation kReps[] = {Representation::kPosS, Representation::kBow,
                                  Representation::kMol, Representation::kBm};
  const char *const kMeasures[] = {"Precision", "Recall", "F1"};
  // Wide enough for "Precision" over a single classifier column.
  const size_t cell_width = classifiers.size() == 1 ? 10 : 7;

  for (SelectionMethod s : selectors) {
    out << "Feature selection: " << SelectionMethodName(s) << "\n";
    std::ostringstream head1, head2;
    head1 << std::left << std::setw(10) << "" << std::setw(8) << ""
          << std::setw(6) << "";
    head2 << std::left << std::setw(10) << "Task" << std::setw(8) << "Repr"
          << std::setw(6) << "Class";
    for (const char *m : kMeasures) {
      head1 << "| " << std::setw(cell_width * classifiers.size()) << m;
      head2 << "| ";
      for (const std::string &c : classifiers) head2 << std::setw(cell_width) << c;
    }
    out << head1.str() << "\n" << head2.str() << "\n";
    for (Task t : kTasks) {
      for (Representation rep : kReps) {
        bool any = false;
        for (const std::string &c : classifiers) any = any || find(t, rep, s, c);
        if (!any) continue;
        const char *const kRowNames[] = {"0", "1", "Avg"};
        for (int row = 0; row < 3; ++row) {
          out << std::left << std::setw(10) << TaskName(t) << std::setw(8)
              << RepresentationName(rep) << std::setw(6) << kRowNames[row];
          for (int m = 0; m < 3; ++m) {
            out << "| ";
            for (const std::string &c : classifiers) {
              const EvalReport *r = find(t, rep, s, c);
              std::string cell = "-";
              if (r) {
                const Prf &p = row < 2 ? r->metrics.per_class[row] : r->metrics.avg;
                const double v = m == 0 ? p.precision : m == 1 ? p.recall : p.f1;
                cell = FormatFixed(v, 2);
              }
              out << std::setw(cell_width) << cell;
            }
          }
          out << "\n";
        }
      }
    }
    out << "\n";
  }

  out << "Comparison with published systems (external rows use other "
         "datasets and are not directly comparable)\n";
  out << std::left << std::setw(10) << "Task" << std::setw(36) << "System"
      << std::setw(20) << "Dataset" << std::setw(8) << "Avg F1" << "Note\n";
  for (Task t : kTasks) {
    const EvalReport *best = nullptr;
    for (const EvalReport &r : reports) {
      if (r.task == t && (!best || r.metrics.avg.f1 > best->metrics.avg.f1)) {
        best = &r;
      }
    }
    if (best) {
      const std::string name = "offlex " +
                               std::string(RepresentationName(best->representation)) +
                               " " + best->classifier + " (" +
                               std::string(SelectionMethodName(best->selector)) + ")";
      out << std::setw(10) << TaskName(t) << std::setw(36) << name
          << std::setw(20) << "this corpus" << std::setw(8)
          << FormatFixed(best->metrics.avg.f1, 2) << "best cell\n";
    }
    for (const ExternalBaseline &b : baselines) {
      if (b.task != t) continue;
      out << std::setw(10) << TaskName(t) << std::setw(36) << b.name
          << std::setw(20) << b.dataset << std::setw(8) << FormatFixed(b.f1, 2)
          << "non-comparable\n";
    }
  }
}

}  // namespace offlex
