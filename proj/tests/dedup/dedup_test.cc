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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "sclab/core/dataset.h"
#include "sclab/core/embedding.h"
#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/dedup/attack.h"
#include "sclab/dedup/dedup.h"
#include "sclab/dedup/embedder.h"
#include "sclab/dedup/poison.h"

namespace sclab::dedup {
namespace {

EmbeddingVector RandomUnit(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.Normal();
  return Normalize(v);
}

TEST(HubSpoke, HandEvaluatedSpoke) {
  const std::vector<double> t = {1, 0, 0};
  const auto e = HubSpokeEmbeddings(t, 1, 0.9);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0][0], 0.9, 1e-12);
  EXPECT_NEAR(e[0][1], 0.43589, 1e-5);
  EXPECT_NEAR(e[0][2], 0.0, 1e-12);
  EXPECT_NEAR(L2Norm(e[0]), 1.0, 1e-12);
}

TEST(HubSpoke, NearOneAlpha) {
  Rng rng(1);
  const auto t = RandomUnit(rng, 5);
  const auto e = HubSpokeEmbeddings(t, 2, 0.999);
  EXPECT_NEAR(Dot(t, e[0]), 0.999, 1e-9);
  EXPECT_NEAR(Dot(e[0], e[1]), 0.998001, 1e-9);
}

TEST(HubSpoke, Contracts) {
  Rng rng(2);
  const auto t = RandomUnit(rng, 4);
  EXPECT_THROW(HubSpokeEmbeddings(t, 4, 0.9), CapacityError);
  EXPECT_THROW(HubSpokeEmbeddings(t, 2, 1.0), ContractViolation);
  EXPECT_THROW(HubSpokeEmbeddings(t, 2, 0.0), ContractViolation);
  EXPECT_THROW(HubSpokeEmbeddings(std::vector<double>{2, 0, 0}, 1, 0.9),
               ContractViolation);
}

TEST(HubSpokeProperty, ExactGeometry) {
  Rng rng(3);
  for (std::size_t d : {8u, 64u}) {
    for (double alpha : {0.8, 0.9, 0.99}) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto t = RandomUnit(rng, d);
        const std::size_t n = 1 + rng.UniformInt(d - 1);
        const auto e = HubSpokeEmbeddings(t, n, alpha);
        ASSERT_EQ(e.size(), n);
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_NEAR(Dot(t, e[i]), alpha, 1e-9);
          for (std::size_t j = i + 1; j < n; ++j) {
            EXPECT_NEAR(Dot(e[i], e[j]), alpha * alpha, 1e-9);
          }
        }
      }
    }
  }
}

TEST(InvertEmbedding, AxisProjectionHandSolution) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 4);
  p(0, 0) = 1;
  p(1, 1) = 1;
  const LinearEmbedder h(p);
  const auto r = InvertEmbedding(h, std::vector<double>{1, 0}, {});
  EXPECT_NEAR(r.achieved_sim, 1.0, 1e-12);
  EXPECT_GT(r.features[0], 0.0);
  EXPECT_NEAR(r.features[1], 0.0, 1e-12);
  EXPECT_FALSE(r.warning.has_value());
}

TEST(InvertEmbedding, KnownPreimageAndInfeasibleTarget) {
  Rng rng(4);
  const LinearEmbedder h(8, 16, 5);
  FeatureVector x0(16);
  for (double& v : x0) v = rng.Uniform();
  EXPECT_GE(InvertEmbedding(h, h.Embed(x0), {}).achieved_sim, 0.999);
  // Nonnegative projection: the all-negative direction is outside the cone.
  const LinearEmbedder pos(Eigen::MatrixXd::Ones(2, 3));
  const auto r = InvertEmbedding(pos, std::vector<double>{-1, -1}, {});
  EXPECT_LT(r.achieved_sim, 1.0);
  EXPECT_TRUE(r.warning.has_value());
}

TEST(ApplyBackdoor, SubstitutionAndIdempotence) {
  const std::vector<double> zero(5, 0.0);
  EXPECT_EQ(ApplyBackdoor(zero, {}, {}), zero);
  const std::vector<std::size_t> idx = {0, 2};
  const std::vector<double> val = {1, 1};
  const auto once = ApplyBackdoor(zero, idx, val);
  EXPECT_EQ(once, (FeatureVector{1, 0, 1, 0, 0}));
  EXPECT_EQ(ApplyBackdoor(once, idx, val), once);
  const std::vector<std::size_t> bad = {7};
  EXPECT_THROW(ApplyBackdoor(zero, bad, std::vector<double>{1}),
               ContractViolation);
}

TEST(Mislabel, NextClassModulo) {
  EXPECT_EQ(Mislabel(0, 10), 1);
  EXPECT_EQ(Mislabel(9, 10), 0);
}

Dataset Ds(const std::vector<FeatureVector>& xs) {
  Dataset d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d.examples.push_back({xs[i], static_cast<int>(i % 2),
                          static_cast<ExampleId>(100 + i)});
  }
  return d;
}

TEST(Dedup, ExactPairs) {
  const Dataset d = Ds({{0.1, 0.2}, {0.1, 0.2}, {0.3, 0.3}});
  const auto g = FindDuplicates(d, DedupPolicy::Exact(Deletion::kDeleteAll),
                                nullptr);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  const auto all = Deduplicate(d, g, Deletion::kDeleteAll, 0);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all.examples[0].id, 102);
  std::set<ExampleId> survivors;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto one = Deduplicate(d, g, Deletion::kDeleteAllButOne, seed);
    ASSERT_EQ(one.size(), 2u);
    survivors.insert(one.examples[0].id);
    EXPECT_EQ(one.examples[1].id, 102);  // input order kept
  }
  EXPECT_EQ(survivors, (std::set<ExampleId>{100, 101}));
}

TEST(DedupPolicy, Validation) {
  DedupPolicy p{DedupMode::kApproximate, Deletion::kDeleteAll, {}};
  EXPECT_THROW(p.Validate(), ContractViolation);
  p.alpha = 1.5;
  EXPECT_THROW(p.Validate(), ContractViolation);
  DedupPolicy e = DedupPolicy::Exact(Deletion::kDeleteAll);
  e.alpha = 0.9;
  EXPECT_THROW(e.Validate(), ContractViolation);
  EXPECT_EQ(ParseDeletion(DeletionName(Deletion::kDeleteAllButOne)),
            Deletion::kDeleteAllButOne);
  EXPECT_EQ(ParseDedupMode(DedupModeName(DedupMode::kApproximate)),
            DedupMode::kApproximate);
}

// Random datasets with planted exact copies and random near-duplicates.
TEST(DedupProperty, DeleteAllIsEdgelessAndKeepOnePerComponent) {
  Rng rng(6);
  const LinearEmbedder h(6, 10, 2);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<FeatureVector> xs;
    const std::size_t n = 5 + rng.UniformInt(30);
    for (std::size_t i = 0; i < n; ++i) {
      if (!xs.empty() && rng.Bernoulli(0.3)) {
        xs.push_back(xs[rng.UniformInt(xs.size())]);
      } else {
        FeatureVector v(10);
        for (double& x : v) x = rng.Uniform();
        xs.push_back(v);
      }
    }
    const Dataset d = Ds(xs);
    for (DedupPolicy policy :
         {DedupPolicy::Exact(Deletion::kDeleteAll),
          DedupPolicy::Approximate(Deletion::kDeleteAll, 0.7)}) {
      const Dataset out = ApplyPolicy(d, policy, &h, trial);
      if (out.size() > 0) {
        EXPECT_TRUE(FindDuplicates(out, policy, &h).edges.empty());
      }
      policy.deletion = Deletion::kDeleteAllButOne;
      const auto g = FindDuplicates(d, policy, &h);
      const Dataset one = Deduplicate(d, g, policy.deletion, trial);
      EXPECT_EQ(one.size(), g.NumComponents());
      const auto comp = g.Components();
      std::set<std::size_t> seen;
      for (const auto& ex : one.examples) {
        EXPECT_TRUE(seen.insert(comp[ex.id - 100]).second);
      }
      EXPECT_EQ(Deduplicate(d, g, policy.deletion, trial).examples.size(),
                one.size());
    }
  }
}

// Hub plus spokes built at alpha_guess, filtered at alpha_real.
class HubSpokeFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(7);
    target_.resize(24);
    for (double& v : target_) v = 0.3 + 0.4 * rng.Uniform();
  }
  Dataset Build(double alpha_guess, bool present) {
    const auto hub = h_.Embed(target_);
    Dataset d;
    if (present) d.examples.push_back({target_, 0, 0});
    const auto spokes = HubSpokeEmbeddings(hub, 8, alpha_guess);
    for (std::size_t i = 0; i < spokes.size(); ++i) {
      InvertOptions opt;
      opt.init = target_;
      d.examples.push_back({InvertEmbedding(h_, spokes[i], opt).features, 1,
                            static_cast<ExampleId>(1 + i)});
    }
    return d;
  }
  LinearEmbedder h_{12, 24, 3};
  FeatureVector target_;
};

TEST_F(HubSpokeFixture, StarCollapsesOnlyWithTheHub) {
  const auto policy = DedupPolicy::Approximate(Deletion::kDeleteAllButOne, 0.9);
  const Dataset with = Build(0.9, true);
  EXPECT_EQ(FindDuplicates(with, policy, &h_).edges.size(), 8u);
  EXPECT_EQ(ApplyPolicy(with, policy, &h_, 1).size(), 1u);
  const Dataset without = Build(0.9, false);
  EXPECT_TRUE(FindDuplicates(without, policy, &h_).edges.empty());
  EXPECT_EQ(ApplyPolicy(without, policy, &h_, 1).size(), 8u);
}

TEST_F(HubSpokeFixture, AlphaRobustnessWindow) {
  const double guess = 0.9;
  for (double real : {0.9, 0.895, 0.89, 0.885, 0.882}) {
    ASSERT_LT(guess * guess, real);
    const auto policy =
        DedupPolicy::Approximate(Deletion::kDeleteAllButOne, real);
    EXPECT_EQ(ApplyPolicy(Build(guess, true), policy, &h_, 2).size(), 1u);
    EXPECT_EQ(ApplyPolicy(Build(guess, false), policy, &h_, 2).size(), 8u);
  }
}

TEST(DedupAttack, SmallExactRunSeparates) {
  DedupAttackConfig c;
  c.n_targets = 10;
  c.shadow_models = 16;
  c.eval_models = 4;
  c.policy = DedupPolicy::Exact(Deletion::kDeleteAll);
  const AttackReport r = RunDedupAttack(c);
  EXPECT_EQ(r.scores.size(), 40u);
  EXPECT_GT(r.extra["auc"].get<double>(), 0.9);
  EXPECT_EQ(r.extra["mean_surviving_duplicates_target_present"], 0.0);
  EXPECT_EQ(r.ToJson(), RunDedupAttack(c).ToJson());
  c.n_targets = 0;
  EXPECT_THROW(RunDedupAttack(c), ContractViolation);
}

}  // namespace
}  // namespace sclab::dedup
