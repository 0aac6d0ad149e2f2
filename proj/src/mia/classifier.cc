// Copyright 2026 The Side Channel Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sclab/mia/classifier.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::mia {

Eigen::VectorXd LogSoftmax(const Eigen::VectorXd& logits) {
  const double mx = logits.maxCoeff();
  const double lse = mx + std::log((logits.array() - mx).exp().sum());
  return logits.array() - lse;
}

Eigen::VectorXd ToyClassifier::Logits(std::span<const double> x) const {
  SCLAB_REQUIRE(x.size() == dim(), "classifier: feature dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> v(x.data(), x.size());
  return weights * (v - center) + bias;
}

std::vector<double> ToyClassifier::Probabilities(
    std::span<const double> x) const {
  Eigen::VectorXd p = LogSoftmax(Logits(x)).array().exp();
  return std::vector<double>(p.data(), p.data() + p.size());
}

double ToyClassifier::Confidence(std::span<const double> x, int label) const {
  SCLAB_REQUIRE(label >= 0 && label < num_classes(),
                "classifier: label out of range");
  return std::exp(LogSoftmax(Logits(x))(label));
}

int ToyClassifier::Predict(std::span<const double> x) const {
  Eigen::Index best;
  Logits(x).maxCoeff(&best);
  return static_cast<int>(best);
}

ToyClassifier MakeUniformClassifier(int num_classes, std::size_t dim) {
  ToyClassifier m;
  m.weights = Eigen::MatrixXd::Zero(num_classes, dim);
  m.bias = Eigen::VectorXd::Zero(num_classes);
  m.center = Eigen::VectorXd::Constant(dim, 0.5);
  return m;
}

RowMatrix CenteredMatrix(const Dataset& data, const Eigen::VectorXd& center) {
  const std::size_t m = data.FeatureDim();
  RowMatrix x(data.size(), m);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x(i, j) = data.examples[i].features[j] - center(j);
    }
  }
  return x;
}

SoftmaxGrad MeanSoftmaxGradient(const ToyClassifier& model,
                                const RowMatrix& centered_x,
                                std::span<const int> labels) {
  const Eigen::Index n = centered_x.rows();
  Eigen::MatrixXd z = centered_x * model.weights.transpose();
  z.rowwise() += model.bias.transpose();
  SoftmaxGrad g;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = z.row(i).maxCoeff();
    z.row(i).array() -= mx;
    const double lse = std::log(z.row(i).array().exp().sum());
    loss -= z(i, labels[i]) - lse;
    z.row(i) = (z.row(i).array() - lse).exp();
    z(i, labels[i]) -= 1.0;
  }
  z /= static_cast<double>(n);
  g.grad_weights = z.transpose() * centered_x;
  g.grad_bias = z.colwise().sum().transpose();
  g.loss = loss / static_cast<double>(n);
  return g;
}

ToyClassifier TrainClassifier(const Dataset& data, const TrainConfig& config,
                              std::uint64_t seed) {
  SCLAB_REQUIRE(!data.empty(), "TrainClassifier: empty dataset");
  SCLAB_REQUIRE(config.epochs >= 0, "TrainClassifier: negative epochs");
  std::set<int> labels_seen;
  for (const auto& ex : data.examples) labels_seen.insert(ex.label);
  SCLAB_REQUIRE(labels_seen.size() >= 2,
                "TrainClassifier: need at least two classes");
  const int c = std::max(config.num_classes, data.NumClasses());
  const std::size_t m = data.FeatureDim();

  ToyClassifier model = MakeUniformClassifier(c, m);
  if (config.center_features) {
    model.center.setZero();
    for (const auto& ex : data.examples) {
      model.center += Eigen::Map<const Eigen::VectorXd>(ex.features.data(), m);
    }
    model.center /= static_cast<double>(data.size());
  }
  Rng rng(SplitSeed(seed, "classifier-init"));
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
    model.weights.data()[i] = config.init_scale * rng.Normal();
  }

  const RowMatrix x = CenteredMatrix(data, model.center);
  std::vector<int> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels[i] = data.examples[i].label;
  }
  model.loss_history.reserve(config.epochs);
  for (int e = 0; e < config.epochs; ++e) {
    SoftmaxGrad g = MeanSoftmaxGradient(model, x, labels);
    if (!std::isfinite(g.loss)) {
      throw NumericalError("TrainClassifier: loss diverged");
    }
    if (config.l2 > 0.0) g.grad_weights += config.l2 * model.weights;
    model.weights -= config.lr * g.grad_weights;
    model.bias -= config.lr * g.grad_bias;
    model.loss_history.push_back(g.loss);
  }
  return model;
}

double Accuracy(const ToyClassifier& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& ex : data.examples) ok += model.Predict(ex.features) == ex.label;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

double LogitTransform(double p) {
  p = std::clamp(p, kConfidenceClamp, 1.0 - kConfidenceClamp);
  return std::log(p / (1.0 - p));
}

}  // namespace sclab::mia
