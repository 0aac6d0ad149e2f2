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

#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/dpaudit/audit.h"
#include "sclab/dpaudit/dp.h"

namespace sclab::dpaudit {
namespace {

TEST(Zcdp, RhoAndConversion) {
  EXPECT_DOUBLE_EQ(ZcdpRho(100, 5.0), 2.0);
  // 0.5 + 2 sqrt(0.5 * ln(1e5)), evaluated by hand.
  EXPECT_NEAR(ZcdpToEps(0.5, 1e-5), 5.298, 1e-3);
  EXPECT_LT(ZcdpToEps(1e-12, 1e-5), 1e-5);
  EXPECT_THROW(ZcdpToEps(0.0, 1e-5), ContractViolation);
  EXPECT_THROW(ZcdpToEps(0.1, 1.0), ContractViolation);
}

TEST(Zcdp, NoiseMultiplierInvertsConversion) {
  for (double eps : {0.5, 1.0, 3.0}) {
    for (std::size_t t : {1u, 100u, 1000u}) {
      const double s = NoiseMultiplierForEps(eps, t);
      EXPECT_NEAR(ZcdpToEps(ZcdpRho(t, s)), eps, 1e-9);
    }
  }
}

TEST(EmpiricalEps, HandEvaluatedRatio) {
  EXPECT_NEAR(EpsFromBounds(0.99, 1e-4, 0.0), 9.200, 1e-3);
  EXPECT_EQ(EpsFromBounds(0.3, 0.3, 0.0), 0.0);
  EXPECT_EQ(EpsFromBounds(1e-6, 0.3, 1e-5), 0.0);
  const auto b = EmpiricalEpsLowerBound(128, 0, 0, 128, 0.0, 0.95);
  // All-correct worlds: TPR_lo = 0.025^(1/128), FPR_hi = 1 - 0.025^(1/128).
  const double lo = std::pow(0.025, 1.0 / 128);
  EXPECT_NEAR(b.epsilon, std::log(lo / (1 - lo)), 1e-9);
  EXPECT_EQ(b.provenance, BudgetSource::kEmpiricalLowerBound);
  EXPECT_EQ(*b.confidence, 0.95);
}

TEST(EmpiricalEps, IndistinguishableIsZeroAndContracts) {
  EXPECT_EQ(EmpiricalEpsLowerBound(50, 50, 50, 50, 1e-5, 0.95).epsilon, 0.0);
  EXPECT_EQ(EmpiricalEpsLowerBound(0, 10, 0, 10, 1e-5, 0.95).epsilon, 0.0);
  EXPECT_THROW(EmpiricalEpsLowerBound(0, 0, 1, 1, 1e-5, 0.95),
               ContractViolation);
  EXPECT_THROW(EmpiricalEpsLowerBound(-1, 2, 1, 1, 1e-5, 0.95),
               ContractViolation);
}

TEST(EmpiricalEps, SymmetricInTheTwoDirections) {
  // Swapping the worlds and flipping every decision maps tp <-> tn and
  // fn <-> fp; the bound must not change.
  const auto a = EmpiricalEpsLowerBound(100, 28, 3, 125, 1e-5, 0.95);
  const auto b = EmpiricalEpsLowerBound(125, 3, 28, 100, 1e-5, 0.95);
  EXPECT_NEAR(a.epsilon, b.epsilon, 1e-12);
  EXPECT_GT(a.epsilon, 0.0);
}

// Null worlds: both worlds flip the same coin, so any positive bound is a
// false alarm. At 95% confidence those must stay rare.
TEST(EmpiricalEpsProperty, NullWorldsRarelyAlarm) {
  Rng rng(21);
  int alarms = 0;
  const int runs = 2000;
  for (int r = 0; r < runs; ++r) {
    const double p = rng.Uniform(0.05, 0.95);
    long long tp = 0, fp = 0;
    for (int i = 0; i < 128; ++i) {
      tp += rng.Bernoulli(p);
      fp += rng.Bernoulli(p);
    }
    alarms += EmpiricalEpsLowerBound(tp, 128 - tp, fp, 128 - fp, 1e-5, 0.95)
                  .epsilon > 0;
  }
  EXPECT_LE(alarms, runs * 5 / 100);
}

Dataset TwoPoints() {
  Dataset d;
  d.examples.push_back({{0.9, 0.1}, 0, 0});
  d.examples.push_back({{0.1, 0.9}, 1, 1});
  return d;
}

TEST(DpSgd, ClippedContributionNeverExceedsClipNorm) {
  // One example at the origin-offset (0.5 + 2, 0.5): ||x - c||^2 + 1 = 5 and
  // ||p - y||^2 = 0.5 at init, so the raw norm is sqrt(2.5).
  Dataset one;
  one.examples.push_back({{2.5, 0.5}, 0, 0});
  DpConfig c;
  c.clip_norm = std::sqrt(2.5) / 2;  // raw gradient has norm 2C
  c.steps = 1;
  c.lr = 1.0;
  DpHooks hooks;
  hooks.disable_noise = true;
  std::vector<double> seen;
  hooks.observe_contributions = [&](std::size_t, std::span<const double> n) {
    seen.assign(n.begin(), n.end());
  };
  const auto init = mia::MakeUniformClassifier(2, 2);
  const auto r = DpSgdTrain(one, init, c, 0, &hooks);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_NEAR(seen[0], c.clip_norm, 1e-12);
  const double moved = std::sqrt((r.model.weights - init.weights).squaredNorm() +
                                 (r.model.bias - init.bias).squaredNorm());
  EXPECT_NEAR(moved, c.clip_norm, 1e-12);
}

TEST(DpSgdProperty, ContributionsBoundedOnRandomData) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d;
    for (int i = 0; i < 30; ++i) {
      d.examples.push_back({{rng.Uniform() * 3, rng.Uniform() * 3, rng.Uniform()},
                            static_cast<int>(rng.UniformInt(3)), i});
    }
    DpConfig c;
    c.clip_norm = rng.Uniform(0.05, 2.0);
    c.noise_multiplier = 1.0;
    c.steps = 10;
    c.lr = 1.0;
    DpHooks hooks;
    double worst = 0;
    hooks.observe_contributions = [&](std::size_t, std::span<const double> n) {
      for (double v : n) worst = std::max(worst, v);
    };
    DpSgdTrain(d, mia::MakeUniformClassifier(3, 3), c, trial, &hooks);
    EXPECT_LE(worst, c.clip_norm * (1 + 1e-12));
  }
}

TEST(DpSgd, RhoDeterminismAndLearning) {
  DpConfig c;
  c.noise_multiplier = 0.01;
  c.steps = 200;
  c.lr = 1.0;
  const auto init = mia::MakeUniformClassifier(2, 2);
  const auto a = DpSgdTrain(TwoPoints(), init, c, 3);
  const auto b = DpSgdTrain(TwoPoints(), init, c, 3);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_DOUBLE_EQ(a.rho, 200 / (2 * 0.01 * 0.01));
  EXPECT_EQ(a.model.Predict(std::vector<double>{0.9, 0.1}), 0);
  EXPECT_EQ(a.model.Predict(std::vector<double>{0.1, 0.9}), 1);
  const auto other = DpSgdTrain(TwoPoints(), init, c, 4);
  EXPECT_NE(a.model.weights, other.model.weights);
}

TEST(DpSgd, Contracts) {
  DpConfig c;
  c.clip_norm = 0;
  EXPECT_THROW(DpSgdTrain(TwoPoints(), mia::MakeUniformClassifier(2, 2), c, 0),
               ContractViolation);
  c = DpConfig{};
  c.delta = 1.0;
  EXPECT_THROW(c.Validate(), ContractViolation);
  EXPECT_THROW(DpSgdTrain(TwoPoints(), mia::MakeUniformClassifier(2, 3),
                          DpConfig{}, 0),
               ContractViolation);
}

TEST(DpAudit, SmallRunHasExpectedShape) {
  DpAuditConfig c;
  c.eval_models = 16;
  c.shadow_models = 8;
  c.n_duplicates = 16;
  c.embed_dim = 24;
  c.feature_dim = 32;
  c.background_size = 100;
  const auto r = RunDpDedupAudit(c);
  const Json& ex = r.report.extra;
  EXPECT_EQ(ex["post_filter_difference"], 16);
  EXPECT_EQ(ex["surviving_duplicates"]["present"], 0);
  EXPECT_EQ(ex["surviving_duplicates"]["absent"], 16);
  EXPECT_EQ(r.report.scores.size(), 32u);
  EXPECT_NEAR(r.accountant.epsilon, ZcdpToEps(0.02), 1e-12);
  EXPECT_EQ(r.report.ToJson(), RunDpDedupAudit(c).report.ToJson());
  c.n_duplicates = 24;
  EXPECT_THROW(RunDpDedupAudit(c), ContractViolation);
}

}  // namespace
}  // namespace sclab::dpaudit
