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

#ifndef SCLAB_MIA_CLASSIFIER_H_
#define SCLAB_MIA_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sclab/core/dataset.h"

namespace sclab::mia {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrainConfig {
  int epochs = 300;
  double lr = 0.5;
  // Subtract the training-set feature mean before the linear map. Without it
  // the [0,1] box offset makes the problem badly conditioned and large
  // learning rates diverge.
  bool center_features = true;
  // L2 penalty (weight decay) on the weights, not the bias.
  double l2 = 0.0;
  // Stddev of the seeded Gaussian weight initialization.
  double init_scale = 0.01;
  // Number of classes; 0 means infer from the data.
  int num_classes = 0;
};

// Multinomial logistic regression: logits = W (x - center) + b.
struct ToyClassifier {
  Eigen::MatrixXd weights;  // C x m
  Eigen::VectorXd bias;     // C
  Eigen::VectorXd center;   // m
  // Mean cross-entropy after each epoch.
  std::vector<double> loss_history;

  int num_classes() const { return static_cast<int>(weights.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(weights.cols()); }

  Eigen::VectorXd Logits(std::span<const double> x) const;
  std::vector<double> Probabilities(std::span<const double> x) const;
  // Softmax probability of `label`.
  double Confidence(std::span<const double> x, int label) const;
  int Predict(std::span<const double> x) const;
};

// Zero weights, zero bias, center at 0.5 (the box midpoint).
ToyClassifier MakeUniformClassifier(int num_classes, std::size_t dim);

// Full-batch gradient descent on the mean cross-entropy. Deterministic given
// the seed. Throws ContractViolation when fewer than two classes are present.
ToyClassifier TrainClassifier(const Dataset& data, const TrainConfig& config,
                              std::uint64_t seed);

// Mean cross-entropy loss and its gradient on (X, labels) where X holds
// already-centered rows.
struct SoftmaxGrad {
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_bias;
  double loss = 0.0;
};
SoftmaxGrad MeanSoftmaxGradient(const ToyClassifier& model,
                                const RowMatrix& centered_x,
                                std::span<const int> labels);

// Rows of the dataset, each minus `center`.
RowMatrix CenteredMatrix(const Dataset& data, const Eigen::VectorXd& center);

double Accuracy(const ToyClassifier& model, const Dataset& data);

// Numerically stable log-softmax of a logit vector.
Eigen::VectorXd LogSoftmax(const Eigen::VectorXd& logits);

// ln(p / (1 - p)) with p clamped to [1e-6, 1 - 1e-6].
double LogitTransform(double p);

inline constexpr double kConfidenceClamp = 1e-6;

}  // namespace sclab::mia

#endif  // SCLAB_MIA_CLASSIFIER_H_
