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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sclab/core/dataset.h"
#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/mia/classifier.h"
#include "sclab/mia/lira.h"

namespace sclab::mia {
namespace {

TEST(LogitTransform, HandValuesAndClamp) {
  EXPECT_NEAR(LogitTransform(0.9), 2.1972, 1e-4);
  EXPECT_NEAR(LogitTransform(0.5), 0.0, 1e-15);
  // ln((1 - 1e-6) / 1e-6)
  EXPECT_NEAR(LogitTransform(1.0), 13.8155, 1e-4);
  EXPECT_NEAR(LogitTransform(0.0), -13.8155, 1e-4);
}

TEST(LogSoftmax, NormalizesAndIsShiftInvariant) {
  Eigen::VectorXd z(3);
  z << 1000.0, 999.0, -5.0;
  const auto a = LogSoftmax(z);
  EXPECT_NEAR(a.array().exp().sum(), 1.0, 1e-12);
  const auto b = LogSoftmax(z.array() - 1000.0);
  EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(FitGaussian, OneDimensionalHandValues) {
  const Gaussian g = FitGaussian({{0.0}, {2.0}}, 1e-4);
  EXPECT_DOUBLE_EQ(g.mean(0), 1.0);
  EXPECT_NEAR(g.cov(0, 0), 1.0 + 1e-4, 1e-15);
  // log N(1; 1, 1 + 1e-4)
  const double x = 1.0;
  EXPECT_NEAR(g.LogDensity(std::span<const double>(&x, 1)),
              -0.5 * std::log(2 * M_PI * (1 + 1e-4)), 1e-12);
}

TEST(FitGaussian, ContractsAndDiagonalFallback) {
  EXPECT_THROW(FitGaussian({{1.0}}), ContractViolation);
  EXPECT_THROW(FitGaussian({{1.0, 2.0}, {1.0}}), ContractViolation);
  // Three samples in 4 dimensions: too few for a full covariance.
  const Gaussian g = FitGaussian({{0, 1, 2, 3}, {1, 1, 2, 3}, {2, 0, 2, 4}});
  EXPECT_TRUE(g.diagonal);
  EXPECT_EQ(g.cov(0, 1), 0.0);
}

TEST(LiraScore, SignAndSymmetry) {
  const auto pair = FitGaussians({{1.0}, {3.0}}, {{-1.0}, {-3.0}});
  const double hi = 2.0, lo = -2.0, mid = 0.0;
  EXPECT_GT(LiraScore(pair, std::span<const double>(&hi, 1)), 0.0);
  EXPECT_LT(LiraScore(pair, std::span<const double>(&lo, 1)), 0.0);
  EXPECT_NEAR(LiraScore(pair, std::span<const double>(&mid, 1)), 0.0, 1e-12);
  EXPECT_NEAR(LiraScore(pair, std::span<const double>(&hi, 1)),
              -LiraScore(pair, std::span<const double>(&lo, 1)), 1e-12);
  EXPECT_EQ(NonmemberToMemberDecision(2.5), -2.5);
}

TEST(ShadowManifest, JsonRoundTrip) {
  ShadowManifest m{42, {true, false, true, true}};
  const auto back = ShadowManifest::FromJson(m.ToJson());
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.inclusion, m.inclusion);
  Json bad = m.ToJson();
  bad["inclusion"] = "01x";
  EXPECT_THROW(ShadowManifest::FromJson(bad), ContractViolation);
}

// Central finite differences as an independent check of the gradient.
TEST(MeanSoftmaxGradient, MatchesFiniteDifferences) {
  Rng rng(9);
  ToyClassifier m = MakeUniformClassifier(3, 4);
  for (int i = 0; i < m.weights.size(); ++i) m.weights.data()[i] = rng.Normal();
  for (int i = 0; i < 3; ++i) m.bias(i) = rng.Normal();
  RowMatrix x(5, 4);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  const std::vector<int> labels = {0, 1, 2, 1, 0};
  const auto g = MeanSoftmaxGradient(m, x, labels);
  const double h = 1e-6;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      ToyClassifier p = m, q = m;
      p.weights(r, c) += h;
      q.weights(r, c) -= h;
      const double fd = (MeanSoftmaxGradient(p, x, labels).loss -
                         MeanSoftmaxGradient(q, x, labels).loss) /
                        (2 * h);
      EXPECT_NEAR(g.grad_weights(r, c), fd, 1e-6);
    }
    ToyClassifier p = m, q = m;
    p.bias(r) += h;
    q.bias(r) -= h;
    const double fd = (MeanSoftmaxGradient(p, x, labels).loss -
                       MeanSoftmaxGradient(q, x, labels).loss) /
                      (2 * h);
    EXPECT_NEAR(g.grad_bias(r), fd, 1e-6);
  }
}

TEST(TrainClassifier, LearnsBlobsDeterministically) {
  Rng rng(1);
  const BlobSpec spec{4, 8, 0.2, 0.8, 0.05};
  const auto centers = MakeBlobCenters(spec, rng);
  const Dataset d = SampleBlobs(spec, centers, 200, 0, rng);
  const TrainConfig cfg{.epochs = 200, .lr = 2.0};
  const auto a = TrainClassifier(d, cfg, 3);
  EXPECT_GT(Accuracy(a, d), 0.95);
  EXPECT_LT(a.loss_history.back(), a.loss_history.front());
  EXPECT_EQ(a.weights, TrainClassifier(d, cfg, 3).weights);
  Dataset one;
  one.examples.push_back(d.examples[0]);
  one.examples.push_back(d.examples[4]);
  EXPECT_THROW(TrainClassifier(one, cfg, 0), ContractViolation);
}

TEST(ToyClassifier, ProbabilitiesAndContracts) {
  const auto m = MakeUniformClassifier(4, 3);
  const std::vector<double> x = {0.1, 0.2, 0.3};
  for (double p : m.Probabilities(x)) EXPECT_DOUBLE_EQ(p, 0.25);
  EXPECT_DOUBLE_EQ(m.Confidence(x, 2), 0.25);
  EXPECT_THROW(m.Confidence(x, 4), ContractViolation);
  EXPECT_THROW(m.Logits(std::vector<double>{0.1}), ContractViolation);
}

}  // namespace
}  // namespace sclab::mia
