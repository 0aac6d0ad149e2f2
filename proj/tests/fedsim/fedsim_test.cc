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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/fedsim/clustering.h"
#include "sclab/fedsim/fl.h"
#include "sclab/fedsim/foolsgold.h"

namespace sclab::fedsim {
namespace {

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  std::size_t i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(FoolsGold, HandEvaluatedCases) {
  auto orth = FoolsGoldMultipliers({Vec({1, 0}), Vec({0, 2})});
  EXPECT_EQ(orth.multipliers, (std::vector<double>{1, 1}));
  auto same = FoolsGoldMultipliers({Vec({1, 2}), Vec({1, 2})});
  EXPECT_NEAR(same.multipliers[0], 0, 1e-12);
  EXPECT_NEAR(same.multipliers[1], 0, 1e-12);
  auto three = FoolsGoldMultipliers({Vec({3, 0}), Vec({3, 0}), Vec({0, 1})});
  EXPECT_NEAR(three.multipliers[0], 0, 1e-12);
  EXPECT_NEAR(three.multipliers[1], 0, 1e-12);
  EXPECT_NEAR(three.multipliers[2], 1, 1e-12);
  // Negative similarity clips to 0.
  auto opposite = FoolsGoldMultipliers({Vec({1, 0}), Vec({-1, 0})});
  EXPECT_EQ(opposite.scores, (std::vector<double>{0, 0}));
}

TEST(FoolsGold, ZeroHistoryAndContracts) {
  auto z = FoolsGoldMultipliers({Vec({0, 0}), Vec({1, 0})});
  EXPECT_EQ(z.multipliers, (std::vector<double>{1, 1}));
  EXPECT_THROW(FoolsGoldMultipliers({Vec({1})}), ContractViolation);
  EXPECT_THROW(FoolsGoldMultipliers({Vec({1}), Vec({1, 2})}),
               ContractViolation);
}

TEST(FoolsGoldProperty, PermutationEquivariantAndBounded) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.UniformInt(6);
    std::vector<Eigen::VectorXd> h(n, Eigen::VectorXd(4));
    for (auto& v : h) {
      for (int j = 0; j < 4; ++j) v(j) = rng.Normal();
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    std::vector<Eigen::VectorXd> hp;
    for (std::size_t i : perm) hp.push_back(h[i]);
    for (bool pardon : {false, true}) {
      const auto a = FoolsGoldMultipliers(h, pardon);
      const auto b = FoolsGoldMultipliers(hp, pardon);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(b.multipliers[i], a.multipliers[perm[i]], 1e-12);
        EXPECT_GE(a.multipliers[i], 0.0);
        EXPECT_LE(a.multipliers[i], 1.0);
        if (!pardon) {
          EXPECT_EQ(a.multipliers[i] == 0.0, a.scores[i] == 1.0);
        }
      }
    }
  }
}

class FlFixture : public ::testing::Test {
 protected:
  FlFixture() : rng_(3) {
    centers_ = MakeBlobCenters(spec_, rng_);
  }
  FlClient Client(int id, int major, std::size_t n) {
    FlClient c;
    c.id = id;
    for (std::size_t i = 0; i < n; ++i) {
      const int label = i % 5 == 4 ? (major + 1) % 3 : major;
      c.data.examples.push_back(
          SampleBlobPoint(spec_, centers_, label, next_id_++, rng_));
    }
    return c;
  }
  BlobSpec spec_{3, 8, 0.3, 0.7, 0.1};
  Rng rng_;
  std::vector<FeatureVector> centers_;
  ExampleId next_id_ = 0;
};

TEST_F(FlFixture, GlobalLossDecreasesWithoutDefense) {
  std::vector<FlClient> clients = {Client(0, 0, 40), Client(1, 1, 40),
                                   Client(2, 2, 40)};
  const auto run =
      RunFl(clients, mia::MakeUniformClassifier(3, 8), {30, 0.5, Defense::kNone});
  ASSERT_EQ(run.models.size(), 31u);
  for (const auto& trace : run.loss_traces) {
    EXPECT_LT(trace.back(), trace.front());
  }
  // History is the sum of deltas, and deltas add up to the model change.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(clients[0].update_history.size());
  for (const auto& c : clients) sum += c.update_history;
  EXPECT_LT((Flatten(run.models.back()) - Flatten(run.models.front()) - sum)
                .norm(),
            1e-9);
}

TEST_F(FlFixture, IdenticalCollidersLeaveNoTrace) {
  // Benign clients come in pairs with the same majority class, so each one's
  // nearest peer is benign.
  std::vector<FlClient> base = {Client(0, 0, 40), Client(1, 0, 40),
                                Client(2, 1, 40), Client(3, 1, 40)};
  FlClient sybil = Client(4, 2, 30);
  sybil.join_round = 5;
  FlClient twin = sybil;
  twin.id = 5;
  std::vector<FlClient> with = base;
  with.push_back(sybil);
  with.push_back(twin);
  const FlOptions opt{25, 0.5, Defense::kFoolsGold};
  const auto a = RunFl(base, mia::MakeUniformClassifier(3, 8), opt);
  const auto b = RunFl(with, mia::MakeUniformClassifier(3, 8), opt);
  for (std::size_t r = 5; r < opt.rounds; ++r) {
    EXPECT_NEAR(b.multipliers[r][4], 0.0, 1e-12);
    EXPECT_NEAR(b.multipliers[r][5], 0.0, 1e-12);
  }
  // Equality of the models additionally needs the benign clients' own scores
  // to be unchanged, i.e. no benign client is closer to the pair than to its
  // nearest benign peer. Check that, then the models.
  for (std::size_t r = 0; r < opt.rounds; ++r) {
    for (int c = 0; c < 4; ++c) {
      ASSERT_NEAR(a.multipliers[r][c], b.multipliers[r][c], 1e-12) << r;
    }
  }
  EXPECT_LT((Flatten(a.models.back()) - Flatten(b.models.back())).norm(), 1e-9);
}

TEST(ClientMembershipAttack, DirectionAndContracts) {
  const std::vector<double> flat(40, 1.0);
  EXPECT_EQ(ClientMembershipAttack(flat, 20, 15, 0.1).score, 0.0);
  EXPECT_FALSE(ClientMembershipAttack(flat, 20, 15, 0.1).absent);
  std::vector<double> falling(40);
  for (int i = 0; i < 40; ++i) falling[i] = 40.0 - i;
  const auto s = ClientMembershipAttack(falling, 20, 15, 0.1);
  EXPECT_DOUBLE_EQ(s.score, 15.0);
  EXPECT_TRUE(s.absent);
  EXPECT_THROW(ClientMembershipAttack(flat, 30, 15), ContractViolation);
  EXPECT_THROW(ClientMembershipAttack(flat, 10, 15), ContractViolation);
}

TEST(FoolsGoldScenario, AttackerLossPlateausOnlyWhenTargetPresent) {
  FoolsGoldConfig c;
  const auto present = RunFoolsGoldOnce(c, 0, 0, true);
  const auto absent = RunFoolsGoldOnce(c, 0, 0, false);
  EXPECT_GT(absent.side_channel_score, present.side_channel_score + 0.5);
  EXPECT_LT(present.side_channel_score, 0.1);
}

TEST(KMeans, IdenticalPointsAndContracts) {
  std::vector<FeatureVector> same(12, FeatureVector{0.3, 0.3});
  auto r = ActivationClusterFilter(same, 1, 11, 0);
  EXPECT_EQ(r.retained.size(), 12u);
  r = ActivationClusterFilter(same, 1, 13, 0);
  EXPECT_TRUE(r.retained.empty());
  EXPECT_THROW(KMeans(same, 13, 0), ContractViolation);
  EXPECT_THROW(KMeans(same, 0, 0), ContractViolation);
}

// Planted copies far from well-separated blobs form their own cluster; its
// size is T-1 or T depending on the target, checked by brute force.
TEST(KMeans, IsolatedCopiesClusterAlone) {
  Rng rng(2);
  std::vector<FeatureVector> pts;
  for (int b = 0; b < 4; ++b) {
    for (int i = 0; i < 30; ++i) {
      pts.push_back({0.1 + 0.2 * b + 0.01 * rng.Normal(), 0.1 + 0.01 * rng.Normal()});
    }
  }
  for (bool present : {false, true}) {
    auto p = pts;
    const std::size_t copies = 10 + present;
    for (std::size_t i = 0; i < copies; ++i) p.push_back({0.9, 0.9});
    const auto f = ActivationClusterFilter(p, 5, 11, 7);
    const std::size_t c = f.clusters.assignment[pts.size()];
    std::size_t brute = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (f.clusters.assignment[i] == c) {
        ++brute;
        EXPECT_EQ(p[i], (FeatureVector{0.9, 0.9}));
      }
    }
    EXPECT_EQ(brute, copies);
    const bool kept = std::binary_search(f.retained.begin(), f.retained.end(),
                                         pts.size());
    EXPECT_EQ(kept, present);
  }
}

TEST(KMeansProperty, LloydIsOrderInvariantGivenCenters) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FeatureVector> pts(60, FeatureVector(3));
    for (auto& p : pts) {
      for (auto& x : p) x = rng.Uniform();
    }
    const auto init = KMeansPlusPlusInit(pts, 6, trial);
    const auto a = Lloyd(pts, init);
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    std::vector<FeatureVector> shuffled;
    for (std::size_t i : perm) shuffled.push_back(pts[i]);
    const auto b = Lloyd(shuffled, init);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_EQ(b.assignment[i], a.assignment[perm[i]]);
    }
    EXPECT_EQ(a.sizes, b.sizes);
  }
  std::vector<FeatureVector> pts(30, FeatureVector{0.0});
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i][0] = rng.Uniform();
  EXPECT_EQ(KMeans(pts, 4, 9).assignment, KMeans(pts, 4, 9).assignment);
}

TEST(ActivationClustering, NoNonmemberErrors) {
  ActivationClusteringConfig c;
  c.trials = 20;
  const AttackReport r = RunActivationClustering(c);
  EXPECT_EQ(r.extra["nonmember_errors"], 0);
  // The opposite polarity reads the same cluster sizes.
  c.polarity = ClusterPolarity::kRemoveLarge;
  const AttackReport q = RunActivationClustering(c);
  EXPECT_EQ(q.extra["nonmember_errors"], 0);
  EXPECT_EQ(q.extra["true_positives"], r.extra["true_positives"]);
}

}  // namespace
}  // namespace sclab::fedsim
