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

#include "offlex/learn.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <nlohmann/json.hpp>

#include "offlex/error.h"
#include "offlex/random.h"

namespace offlex {

namespace {

void CheckTrainingSet(std::span<const FeatureVector> vectors,
                      std::span<const int> labels, size_t num_features,
                      bool need_both_classes) {
  if (vectors.size() != labels.size()) {
    throw Error(ErrorCode::kIdMismatch, "vector and label counts differ");
  }
  if (vectors.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no training examples");
  }
  size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw Error(ErrorCode::kLabelDomain, "training label outside {0,1}");
    }
    positives += y;
  }
  if (need_both_classes && (positives == 0 || positives == labels.size())) {
    throw Error(ErrorCode::kSingleClass, "training data has a single class");
  }
  for (const FeatureVector &v : vectors) {
    for (const FeatureEntry &e : v.entries) {
      if (e.id < 0 || static_cast<size_t>(e.id) >= num_features) {
        throw Error(ErrorCode::kVocabularyMismatch,
                    "feature id " + std::to_string(e.id) +
                        " outside the training vocabulary");
      }
    }
  }
}

std::array<double, 2> Softmax2(double z0, double z1) {
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Naive Bayes

NbModel::NbModel(std::array<double, 2> log_prior,
                 std::array<std::vector<double>, 2> log_likelihood)
    : log_prior_(log_prior), log_likelihood_(std::move(log_likelihood)) {}

std::array<double, 2> NbModel::Posterior(const FeatureVector &x) const {
  std::array<double, 2> log_joint = log_prior_;
  for (int c = 0; c < 2; ++c) {
    for (const FeatureEntry &e : x.entries) {
      if (e.id >= 0 && static_cast<size_t>(e.id) < num_features()) {
        log_joint[c] += e.weight * log_likelihood_[c][e.id];
      }
    }
  }
  return Softmax2(log_joint[0], log_joint[1]);
}

Prediction NbModel::Predict(const FeatureVector &x) const {
  std::array<double, 2> p = Posterior(x);
  return {x.doc_id, p[1] > p[0] ? 1 : 0, p[1]};
}

NbModel TrainNb(std::span<const FeatureVector> vectors,
                std::span<const int> labels, size_t num_features,
                const NbParams &params) {
  if (!(params.alpha > 0)) {
    throw Error(ErrorCode::kConfigInvalid, "NB smoothing must be positive");
  }
  CheckTrainingSet(vectors, labels, num_features, true);
  std::array<std::vector<double>, 2> counts{
      std::vector<double>(num_features, 0.0),
      std::vector<double>(num_features, 0.0)};
  std::array<double, 2> docs{0, 0};
  for (size_t i = 0; i < vectors.size(); ++i) {
    const int c = labels[i];
    docs[c] += 1;
    for (const FeatureEntry &e : vectors[i].entries) {
      if (e.weight < 0) {
        throw Error(ErrorCode::kNegativeWeight,
                    "multinomial NB needs non-negative weights (document '" +
                        vectors[i].doc_id + "')");
      }
      counts[c][e.id] += e.weight;
    }
  }
  std::array<double, 2> log_prior;
  const double n = static_cast<double>(vectors.size());
  for (int c = 0; c < 2; ++c) {
    log_prior[c] = std::log(docs[c] / n);
    const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0);
    const double denom = std::log(total + params.alpha * num_features);
    for (double &v : counts[c]) v = std::log(v + params.alpha) - denom;
  }
  return NbModel(log_prior, std::move(counts));
}

// ---------------------------------------------------------------------------
// SVM

SvmModel::SvmModel(std::vector<double> weights, double bias, SvmParams params)
    : weights_(std::move(weights)), bias_(bias), params_(params) {}

double SvmModel::Margin(const FeatureVector &x) const {
  double m = bias_;
  for (const FeatureEntry &e : x.entries) {
    if (e.id >= 0 && static_cast<size_t>(e.id) < weights_.size()) {
      m += weights_[e.id] * e.weight;
    }
  }
  return m;
}

Prediction SvmModel::Predict(const FeatureVector &x) const {
  const double m = Margin(x);
  return {x.doc_id, m > 0 ? 1 : 0, m};
}

double SvmObjective(std::span<const double> weights, double bias,
                    double lambda, std::span<const FeatureVector> vectors,
                    std::span<const int> labels) {
  double norm2 = 0;
  for (double w : weights) norm2 += w * w;
  double hinge = 0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    double m = bias;
    for (const FeatureEntry &e : vectors[i].entries) m += weights[e.id] * e.weight;
    const double y = labels[i] == 1 ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * m);
  }
  return 0.5 * lambda * norm2 + hinge / static_cast<double>(vectors.size());
}

SvmModel TrainSvm(std::span<const FeatureVector> vectors,
                  std::span<const int> labels, size_t num_features,
                  const SvmParams &params,
                  std::vector<double> *epoch_objectives) {
  if (!(params.lambda > 0) || params.epochs < 0) {
    throw Error(ErrorCode::kConfigInvalid,
                "SVM needs lambda > 0 and a non-negative epoch count");
  }
  CheckTrainingSet(vectors, labels, num_features, true);
  const double lambda = params.lambda;
  const double t0 = 1.0 / lambda;
  const double radius2 = 1.0 / lambda;

  // w = scale * v keeps the shrink step O(1).
  std::vector<double> v(num_features, 0.0);
  double scale = 1.0;
  double v_norm2 = 0.0;
  double bias = 0.0;

  std::vector<double> sum_w(num_features, 0.0);
  double sum_b = 0.0;
  std::vector<double> avg_w(num_features, 0.0);
  // Checkpoint with the lowest objective among the epoch averages so far.
  std::vector<double> best_w(num_features, 0.0);
  double best_b = 0.0;
  double best_obj = std::numeric_limits<double>::infinity();

  std::vector<size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(params.seed);
  double t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    for (size_t i : order) {
      t += 1;
      const double eta = 1.0 / (lambda * (t + t0));
      const FeatureVector &x = vectors[i];
      const double y = labels[i] == 1 ? 1.0 : -1.0;
      double dot = 0;
      for (const FeatureEntry &e : x.entries) dot += v[e.id] * e.weight;
      const double margin = y * (scale * dot + bias);

      scale *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (const FeatureEntry &e : x.entries) {
          const double old = v[e.id];
          v[e.id] = old + step * e.weight;
          v_norm2 += v[e.id] * v[e.id] - old * old;
        }
        bias += eta * y;
      }
      const double w_norm2 = scale * scale * v_norm2;
      if (w_norm2 > radius2) scale *= std::sqrt(radius2 / w_norm2);
      if (scale < 1e-9) {
        for (double &vi : v) vi *= scale;
        v_norm2 = 0;
        for (double vi : v) v_norm2 += vi * vi;
        scale = 1.0;
      }
    }
    for (size_t f = 0; f < num_features; ++f) {
      sum_w[f] += scale * v[f];
      avg_w[f] = sum_w[f] / (epoch + 1);
    }
    sum_b += bias;
    const double avg_b = sum_b / (epoch + 1);
    const double obj = SvmObjective(avg_w, avg_b, lambda, vectors, labels);
    if (obj <= best_obj) {
      best_obj = obj;
      best_w = avg_w;
      best_b = avg_b;
    }
    if (epoch_objectives) epoch_objectives->push_back(best_obj);
  }
  return SvmModel(std::move(best_w), best_b, params);
}

// ---------------------------------------------------------------------------
// MLP

MlpModel::MlpModel(size_t num_features, const MlpParams &params)
    : num_features_(num_features), hidden_(params.hidden_units), params_(params) {
  if (params.hidden_units <= 0) {
    throw Error(ErrorCode::kConfigInvalid, "MLP needs at least one hidden unit");
  }
  const size_t h = static_cast<size_t>(hidden_);
  Rng rng(params.seed);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(num_features + h));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + 2));
  w1_.resize(num_features * h);
  for (double &w : w1_) w = rng.Uniform(-limit1, limit1);
  b1_.assign(h, 0.0);
  w2_.resize(2 * h);
  for (double &w : w2_) w = rng.Uniform(-limit2, limit2);
  b2_.assign(2, 0.0);
}

namespace {

// Activations of one forward pass.
struct Forward {
  std::vector<double> pre;     // hidden pre-activations
  std::vector<double> hidden;  // ReLU outputs
  std::array<double, 2> prob{};
};

void RunForward(const MlpModel &m, const FeatureVector &x, Forward *out) {
  const size_t h = static_cast<size_t>(m.hidden_units());
  out->pre.assign(m.hidden_bias().begin(), m.hidden_bias().end());
  const std::vector<double> &w1 = m.input_weights();
  for (const FeatureEntry &e : x.entries) {
    if (e.id < 0 || static_cast<size_t>(e.id) >= m.num_features()) continue;
    const double *row = &w1[static_cast<size_t>(e.id) * h];
    for (size_t j = 0; j < h; ++j) out->pre[j] += e.weight * row[j];
  }
  out->hidden.resize(h);
  for (size_t j = 0; j < h; ++j) out->hidden[j] = std::max(0.0, out->pre[j]);
  const std::vector<double> &w2 = m.output_weights();
  double z[2];
  for (int c = 0; c < 2; ++c) {
    z[c] = m.output_bias()[c];
    for (size_t j = 0; j < h; ++j) z[c] += w2[c * h + j] * out->hidden[j];
  }
  out->prob = Softmax2(z[0], z[1]);
}

double CrossEntropy(const std::array<double, 2> &prob, int label) {
  return -std::log(std::max(prob[label], 1e-300));
}

// Backpropagates one example; accumulates output-layer gradients and
// returns the hidden-layer delta in `delta_hidden`.
void Backward(const MlpModel &m, const Forward &f, int label,
              std::vector<double> *grad_w2, std::vector<double> *grad_b2,
              std::vector<double> *delta_hidden) {
  const size_t h = static_cast<size_t>(m.hidden_units());
  const double dz[2] = {f.prob[0] - (label == 0 ? 1.0 : 0.0),
                        f.prob[1] - (label == 1 ? 1.0 : 0.0)};
  const std::vector<double> &w2 = m.output_weights();
  delta_hidden->assign(h, 0.0);
  for (int c = 0; c < 2; ++c) {
    (*grad_b2)[c] += dz[c];
    for (size_t j = 0; j < h; ++j) {
      (*grad_w2)[c * h + j] += dz[c] * f.hidden[j];
      (*delta_hidden)[j] += w2[c * h + j] * dz[c];
    }
  }
  for (size_t j = 0; j < h; ++j) {
    if (f.pre[j] <= 0) (*delta_hidden)[j] = 0.0;
  }
}

}  // namespace

std::array<double, 2> MlpModel::Probabilities(const FeatureVector &x) const {
  Forward f;
  RunForward(*this, x, &f);
  return f.prob;
}

Prediction MlpModel::Predict(const FeatureVector &x) const {
  std::array<double, 2> p = Probabilities(x);
  return {x.doc_id, p[1] > p[0] ? 1 : 0, p[1]};
}

double MlpLoss(const MlpModel &model, std::span<const FeatureVector> vectors,
               std::span<const int> labels) {
  if (vectors.empty()) return 0.0;
  Forward f;
  double loss = 0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    RunForward(model, vectors[i], &f);
    loss += CrossEntropy(f.prob, labels[i]);
  }
  return loss / static_cast<double>(vectors.size());
}

double MlpLossAndGradient(const MlpModel &model,
                          std::span<const FeatureVector> vectors,
                          std::span<const int> labels, MlpGradient *gradient) {
  const size_t h = static_cast<size_t>(model.hidden_units());
  gradient->input_weights.assign(model.input_weights().size(), 0.0);
  gradient->hidden_bias.assign(h, 0.0);
  gradient->output_weights.assign(2 * h, 0.0);
  gradient->output_bias.assign(2, 0.0);
  if (vectors.empty()) return 0.0;
  Forward f;
  std::vector<double> delta;
  double loss = 0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    RunForward(model, vectors[i], &f);
    loss += CrossEntropy(f.prob, labels[i]);
    Backward(model, f, labels[i], &gradient->output_weights,
             &gradient->output_bias, &delta);
    for (size_t j = 0; j < h; ++j) gradient->hidden_bias[j] += delta[j];
    for (const FeatureEntry &e : vectors[i].entries) {
      double *row = &gradient->input_weights[static_cast<size_t>(e.id) * h];
      for (size_t j = 0; j < h; ++j) row[j] += e.weight * delta[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(vectors.size());
  for (auto *block : {&gradient->input_weights, &gradient->hidden_bias,
                      &gradient->output_weights, &gradient->output_bias}) {
    for (double &g : *block) g *= inv;
  }
  return loss * inv;
}

class MlpTrainer {
 public:
  static MlpModel Run(std::span<const FeatureVector> vectors,
                      std::span<const int> labels, size_t num_features,
                      const MlpParams &params,
                      std::vector<double> *epoch_losses) {
    if (params.epochs < 0 || params.batch_size <= 0 ||
        !(params.learning_rate > 0)) {
      throw Error(ErrorCode::kConfigInvalid,
                  "MLP needs epochs >= 0, batch_size > 0, learning_rate > 0");
    }
    CheckTrainingSet(vectors, labels, num_features, false);
    MlpModel m(num_features, params);
    const size_t h = static_cast<size_t>(m.hidden_);
    auto check = [&](double loss) {
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNonFiniteLoss, "MLP training diverged");
      }
      if (epoch_losses) epoch_losses->push_back(loss);
    };
    if (epoch_losses) check(MlpLoss(m, vectors, labels));

    std::vector<size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(params.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<double> grad_w2(2 * h), grad_b2(2), grad_b1(h);
    std::vector<std::vector<double>> deltas;
    Forward f;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      rng.Shuffle(std::span<size_t>(order));
      double epoch_loss = 0;
      for (size_t start = 0; start < order.size();
           start += static_cast<size_t>(params.batch_size)) {
        const size_t end =
            std::min(order.size(), start + static_cast<size_t>(params.batch_size));
        const size_t batch = end - start;
        std::fill(grad_w2.begin(), grad_w2.end(), 0.0);
        std::fill(grad_b2.begin(), grad_b2.end(), 0.0);
        std::fill(grad_b1.begin(), grad_b1.end(), 0.0);
        deltas.resize(batch);
        for (size_t b = 0; b < batch; ++b) {
          const size_t i = order[start + b];
          RunForward(m, vectors[i], &f);
          epoch_loss += CrossEntropy(f.prob, labels[i]);
          Backward(m, f, labels[i], &grad_w2, &grad_b2, &deltas[b]);
          for (size_t j = 0; j < h; ++j) grad_b1[j] += deltas[b][j];
        }
        const double step = params.learning_rate / static_cast<double>(batch);
        for (size_t b = 0; b < batch; ++b) {
          for (const FeatureEntry &e : vectors[order[start + b]].entries) {
            double *row = &m.w1_[static_cast<size_t>(e.id) * h];
            const double s = step * e.weight;
            for (size_t j = 0; j < h; ++j) row[j] -= s * deltas[b][j];
          }
        }
        for (size_t j = 0; j < h; ++j) m.b1_[j] -= step * grad_b1[j];
        for (size_t k = 0; k < 2 * h; ++k) m.w2_[k] -= step * grad_w2[k];
        for (int c = 0; c < 2; ++c) m.b2_[c] -= step * grad_b2[c];
      }
      if (!std::isfinite(epoch_loss)) {
        throw Error(ErrorCode::kNonFiniteLoss, "MLP training diverged");
      }
      if (epoch_losses) check(MlpLoss(m, vectors, labels));
    }
    return m;
  }
};

MlpModel TrainMlp(std::span<const FeatureVector> vectors,
                  std::span<const int> labels, size_t num_features,
                  const MlpParams &params, std::vector<double> *epoch_losses) {
  return MlpTrainer::Run(vectors, labels, num_features, params, epoch_losses);
}

// ---------------------------------------------------------------------------
// Front end

std::string_view ClassifierKindName(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kNb: return "NB";
    case ClassifierKind::kSvm: return "SVM";
    case ClassifierKind::kMlp: return "MLP";
  }
  return "";
}

ClassifierKind ParseClassifierKind(std::string_view name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::toupper(c)));
  if (n == "NB") return ClassifierKind::kNb;
  if (n == "SVM") return ClassifierKind::kSvm;
  if (n == "MLP") return ClassifierKind::kMlp;
  throw Error(ErrorCode::kUsage, "unknown classifier '" + std::string(name) +
                                     "' (valid: NB, SVM, MLP)");
}

Classifier Train(const ClassifierSpec &spec,
                 std::span<const FeatureVector> vectors,
                 std::span<const int> labels, size_t num_features) {
  switch (spec.kind) {
    case ClassifierKind::kNb:
      return TrainNb(vectors, labels, num_features, spec.nb);
    case ClassifierKind::kSvm:
      return TrainSvm(vectors, labels, num_features, spec.svm);
    case ClassifierKind::kMlp:
      return TrainMlp(vectors, labels, num_features, spec.mlp);
  }
  throw Error(ErrorCode::kUsage, "unknown classifier");
}

Prediction Predict(const Classifier &model, const FeatureVector &x) {
  return std::visit([&](const auto &m) { return m.Predict(x); }, model);
}

ClassifierKind KindOf(const Classifier &model) {
  switch (model.index()) {
    case 0: return ClassifierKind::kNb;
    case 1: return ClassifierKind::kSvm;
    default: return ClassifierKind::kMlp;
  }
}

std::string SerializeClassifier(const Classifier &model) {
  nlohmann::json j;
  j["kind"] = ClassifierKindName(KindOf(model));
  if (const auto *nb = std::get_if<NbModel>(&model)) {
    j["log_prior"] = nb->log_prior();
    j["log_likelihood"] = nb->log_likelihood();
  } else if (const auto *svm = std::get_if<SvmModel>(&model)) {
    j["lambda"] = svm->params().lambda;
    j["epochs"] = svm->params().epochs;
    j["seed"] = svm->params().seed;
    j["bias"] = svm->bias();
    j["weights"] = svm->weights();
  } else {
    const auto &mlp = std::get<MlpModel>(model);
    j["num_features"] = mlp.num_features();
    j["hidden_units"] = mlp.params().hidden_units;
    j["learning_rate"] = mlp.params().learning_rate;
    j["epochs"] = mlp.params().epochs;
    j["batch_size"] = mlp.params().batch_size;
    j["seed"] = mlp.params().seed;
    j["w1"] = mlp.input_weights();
    j["b1"] = mlp.hidden_bias();
    j["w2"] = mlp.output_weights();
    j["b2"] = mlp.output_bias();
  }
  return std::string(kModelMagic) + " " + std::to_string(kModelFormatVersion) +
         "\n" + j.dump() + "\n";
}

Classifier DeserializeClassifier(std::string_view text) {
  const size_t newline = text.find('\n');
  std::string_view header = text.substr(0, newline);
  const std::string expected =
      std::string(kModelMagic) + " " + std::to_string(kModelFormatVersion);
  if (!header.starts_with(kModelMagic)) {
    throw Error(ErrorCode::kModelFormat, "missing model header");
  }
  if (header != expected) {
    throw Error(ErrorCode::kModelVersionMismatch,
                "model header '" + std::string(header) + "', expected '" +
                    expected + "'");
  }
  try {
    nlohmann::json j = nlohmann::json::parse(
        newline == std::string_view::npos ? std::string_view() : text.substr(newline + 1));
    const ClassifierKind kind = ParseClassifierKind(j.at("kind").get<std::string>());
    switch (kind) {
      case ClassifierKind::kNb:
        return NbModel(j.at("log_prior").get<std::array<double, 2>>(),
                       j.at("log_likelihood")
                           .get<std::array<std::vector<double>, 2>>());
      case ClassifierKind::kSvm: {
        SvmParams p{j.at("lambda").get<double>(), j.at("epochs").get<int>(),
                    j.at("seed").get<uint64_t>()};
        return SvmModel(j.at("weights").get<std::vector<double>>(),
                        j.at("bias").get<double>(), p);
      }
      case ClassifierKind::kMlp: {
        MlpParams p{j.at("hidden_units").get<int>(),
                    j.at("learning_rate").get<double>(),
                    j.at("epochs").get<int>(), j.at("batch_size").get<int>(),
                    j.at("seed").get<uint64_t>()};
        const size_t nf = j.at("num_features").get<size_t>();
        MlpModel restored(nf, p);
        restored.input_weights() = j.at("w1").get<std::vector<double>>();
        restored.hidden_bias() = j.at("b1").get<std::vector<double>>();
        restored.output_weights() = j.at("w2").get<std::vector<double>>();
        restored.output_bias() = j.at("b2").get<std::vector<double>>();
        const size_t h = static_cast<size_t>(p.hidden_units);
        if (restored.input_weights().size() != nf * h ||
            restored.hidden_bias().size() != h ||
            restored.output_weights().size() != 2 * h ||
            restored.output_bias().size() != 2) {
          throw Error(ErrorCode::kModelFormat, "MLP parameter shapes disagree");
        }
        return restored;
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kModelFormat, std::string("bad model body: ") + e.what());
  }
  throw Error(ErrorCode::kModelFormat, "unknown model kind");
}

}  // namespace offlex
