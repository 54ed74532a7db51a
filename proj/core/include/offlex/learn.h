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

#ifndef OFFLEX_LEARN_H_
#define OFFLEX_LEARN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "offlex/vectorize.h"

namespace offlex {

struct Prediction {
  std::string doc_id;
  int label = 0;
  // NB: posterior of class 1. SVM: margin. MLP: softmax probability of 1.
  double score = 0.0;

  bool operator==(const Prediction &) const = default;
};

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes

struct NbParams {
  double alpha = 1.0;  // Laplace smoothing

  bool operator==(const NbParams &) const = default;
};

class NbModel {
 public:
  NbModel() = default;
  NbModel(std::array<double, 2> log_prior,
          std::array<std::vector<double>, 2> log_likelihood);

  size_t num_features() const { return log_likelihood_[0].size(); }
  const std::array<double, 2> &log_prior() const { return log_prior_; }
  const std::array<std::vector<double>, 2> &log_likelihood() const {
    return log_likelihood_;
  }

  // Normalized class posteriors for one document.
  std::array<double, 2> Posterior(const FeatureVector &x) const;
  // Class 1 iff its posterior is strictly larger.
  Prediction Predict(const FeatureVector &x) const;

  bool operator==(const NbModel &) const = default;

 private:
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_likelihood_;
};

// P(f|c) = (N_cf + alpha) / (N_c + alpha * num_features). Throws
// NegativeWeight on a negative entry and SingleClass unless both labels occur.
NbModel TrainNb(std::span<const FeatureVector> vectors,
                std::span<const int> labels, size_t num_features,
                const NbParams &params = {});

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmParams {
  double lambda = 1e-4;
  int epochs = 100;
  uint64_t seed = 0;

  bool operator==(const SvmParams &) const = default;
};

class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(std::vector<double> weights, double bias, SvmParams params);

  const std::vector<double> &weights() const { return weights_; }
  double bias() const { return bias_; }
  const SvmParams &params() const { return params_; }
  size_t num_features() const { return weights_.size(); }

  double Margin(const FeatureVector &x) const;
  // Class 1 iff the margin is strictly positive.
  Prediction Predict(const FeatureVector &x) const;

  bool operator==(const SvmModel &) const = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  SvmParams params_;
};

// lambda/2 * |w|^2 + mean(max(0, 1 - y (w.x + b))) with y in {-1, +1}.
double SvmObjective(std::span<const double> weights, double bias,
                    double lambda, std::span<const FeatureVector> vectors,
                    std::span<const int> labels);

// Stochastic subgradient descent on the primal hinge objective with step
// 1/(lambda (t + t0)), t0 = 1/lambda, projection of w onto the ball of
// radius 1/sqrt(lambda), and an unregularized bias. Each epoch visits the
// examples in a seeded random order. After each epoch the end-of-epoch
// iterates so far are averaged; the returned model is the average with the
// lowest objective, so the checkpoint objective never increases. When
// `epoch_objectives` is given it receives that checkpoint objective after
// each epoch.
SvmModel TrainSvm(std::span<const FeatureVector> vectors,
                  std::span<const int> labels, size_t num_features,
                  const SvmParams &params = {},
                  std::vector<double> *epoch_objectives = nullptr);

// ---------------------------------------------------------------------------
// One-hidden-layer perceptron

struct MlpParams {
  int hidden_units = 100;
  double learning_rate = 0.01;
  int epochs = 50;
  int batch_size = 32;
  uint64_t seed = 0;

  bool operator==(const MlpParams &) const = default;
};

// ReLU hidden layer and a two-way softmax output trained on cross-entropy.
// Input weights are stored feature-major so sparse inputs touch one
// contiguous row per active feature.
class MlpModel {
 public:
  MlpModel() = default;
  // Glorot-uniform weights drawn from `params.seed`, zero biases.
  MlpModel(size_t num_features, const MlpParams &params);

  size_t num_features() const { return num_features_; }
  int hidden_units() const { return hidden_; }
  const MlpParams &params() const { return params_; }

  // Parameter blocks, exposed for serialization and gradient checks.
  std::vector<double> &input_weights() { return w1_; }    // [feature][hidden]
  std::vector<double> &hidden_bias() { return b1_; }      // [hidden]
  std::vector<double> &output_weights() { return w2_; }   // [class][hidden]
  std::vector<double> &output_bias() { return b2_; }      // [class]
  const std::vector<double> &input_weights() const { return w1_; }
  const std::vector<double> &hidden_bias() const { return b1_; }
  const std::vector<double> &output_weights() const { return w2_; }
  const std::vector<double> &output_bias() const { return b2_; }

  std::array<double, 2> Probabilities(const FeatureVector &x) const;
  // Class 1 iff its probability is strictly larger.
  Prediction Predict(const FeatureVector &x) const;

  bool operator==(const MlpModel &) const = default;

 private:
  friend class MlpTrainer;
  size_t num_features_ = 0;
  int hidden_ = 0;
  MlpParams params_;
  std::vector<double> w1_, b1_, w2_, b2_;
};

// Gradient of the mean cross-entropy, laid out like the model's parameters.
struct MlpGradient {
  std::vector<double> input_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  std::vector<double> output_bias;
};

// Mean cross-entropy over the examples.
double MlpLoss(const MlpModel &model, std::span<const FeatureVector> vectors,
               std::span<const int> labels);

// Mean cross-entropy and its analytic gradient.
double MlpLossAndGradient(const MlpModel &model,
                          std::span<const FeatureVector> vectors,
                          std::span<const int> labels, MlpGradient *gradient);

// Mini-batch gradient descent with a seeded shuffle per epoch. Throws
// NonFiniteLoss if the loss diverges. `epoch_losses`, when given, receives
// the training loss before training and after every epoch.
MlpModel TrainMlp(std::span<const FeatureVector> vectors,
                  std::span<const int> labels, size_t num_features,
                  const MlpParams &params = {},
                  std::vector<double> *epoch_losses = nullptr);

// ---------------------------------------------------------------------------
// Uniform front end

enum class ClassifierKind { kNb, kSvm, kMlp };

std::string_view ClassifierKindName(ClassifierKind kind);  // "NB", ...
ClassifierKind ParseClassifierKind(std::string_view name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kNb;
  NbParams nb;
  SvmParams svm;
  MlpParams mlp;

  std::string Name() const { return std::string(ClassifierKindName(kind)); }
};

using Classifier = std::variant<NbModel, SvmModel, MlpModel>;

Classifier Train(const ClassifierSpec &spec,
                 std::span<const FeatureVector> vectors,
                 std::span<const int> labels, size_t num_features);

// Empty vectors are allowed: NB falls back to the priors, SVM to the bias
// and the MLP to its bias path. Ties go to class 0.
Prediction Predict(const Classifier &model, const FeatureVector &x);

ClassifierKind KindOf(const Classifier &model);

// Text serialization: a magic line "offlex-model <version>" followed by a
// JSON body. Round-trips every parameter exactly.
inline constexpr std::string_view kModelMagic = "offlex-model";
inline constexpr int kModelFormatVersion = 1;

std::string SerializeClassifier(const Classifier &model);
Classifier DeserializeClassifier(std::string_view text);

}  // namespace offlex

#endif  // OFFLEX_LEARN_H_
