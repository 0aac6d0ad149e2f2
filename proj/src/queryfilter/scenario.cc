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

#include "sclab/queryfilter/scenario.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::queryfilter {

void QueryFilterConfig::Validate() const {
  fingerprint.Validate();
  SCLAB_REQUIRE(n_queried >= 1 && n_heldout >= 1,
                "n_queried and n_heldout must be >= 1");
  SCLAB_REQUIRE(dim >= fingerprint.window, "dim must be >= window");
  SCLAB_REQUIRE(num_classes >= 1, "num_classes must be >= 1");
  SCLAB_REQUIRE(threshold > 0 && threshold <= 1,
                "threshold must be in (0, 1]");
  SCLAB_REQUIRE(replay_noise >= 0, "replay_noise must be >= 0");
}

AttackReport RunQueryFilter(const QueryFilterConfig& config) {
  config.Validate();
  const BlobSpec spec{config.num_classes, config.dim, 0.2, 0.8,
                      config.noise_std};
  Rng world(SplitSeed(config.seed, "query_world"));
  const auto centers = MakeBlobCenters(spec, world);
  const std::size_t total = config.n_queried + config.n_heldout;
  const Dataset points = SampleBlobs(spec, centers, total, 0, world);
  // Blob labels are round-robin; shuffle so both sets mix classes.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  world.Shuffle(order);
  auto is_queried = [&](std::size_t i) { return i < config.n_queried; };
  auto point = [&](std::size_t i) -> const FeatureVector& {
    return points.examples[order[i]].features;
  };

  GlobalHistory history(config.fingerprint, config.threshold,
                        config.store_rejected);
  std::size_t victim_rejections = 0;
  for (std::size_t i = 0; i < config.n_queried; ++i) {
    victim_rejections += history.Submit(point(i)) == Decision::kReject;
  }

  Rng attacker(SplitSeed(config.seed, "query_attacker"));
  std::vector<std::size_t> probes(total);
  std::iota(probes.begin(), probes.end(), 0);
  attacker.Shuffle(probes);
  AttackReport report;
  report.scenario_name = "query_filter";
  report.seed = config.seed;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i : probes) {
    FeatureVector x = point(i);
    if (config.replay_noise > 0) {
      for (double& v : x) {
        v = Clamp01(v + attacker.Uniform(-config.replay_noise,
                                         config.replay_noise));
      }
    }
    const bool said_queried = ProbeQueryMembership(history, x);
    tp += said_queried && is_queried(i);
    fp += said_queried && !is_queried(i);
    report.scores.push_back({said_queried ? 1.0 : 0.0, is_queried(i)});
  }
  report.query_count = static_cast<std::int64_t>(total);
  report.ComputeRoc();

  // Collision rate between independent draws from the same distribution.
  Rng mc(SplitSeed(config.seed, "query_collisions"));
  std::size_t collisions = 0;
  double sim_sum = 0;
  for (std::size_t p = 0; p < config.collision_pairs; ++p) {
    const int a = static_cast<int>(mc.UniformInt(config.num_classes));
    const int b = static_cast<int>(mc.UniformInt(config.num_classes));
    const auto xa = SampleBlobPoint(spec, centers, a, 0, mc);
    const auto xb = SampleBlobPoint(spec, centers, b, 0, mc);
    const double s = FingerprintSimilarity(
        Fingerprint(xa.features, config.fingerprint),
        Fingerprint(xb.features, config.fingerprint));
    sim_sum += s;
    collisions += s >= config.threshold;
  }
  const double pairs = static_cast<double>(std::max<std::size_t>(1, config.collision_pairs));
  const double pair_rate = static_cast<double>(collisions) / pairs;
  // A held-out probe is compared with at most `total` stored entries.
  const double per_probe =
      1.0 - std::pow(1.0 - pair_rate, static_cast<double>(total));
  const double n_out = static_cast<double>(config.n_heldout);
  const double fpr_bound =
      per_probe + 3.0 * std::sqrt(per_probe * (1.0 - per_probe) / n_out);

  Json& ex = report.extra;
  ex["tpr"] = static_cast<double>(tp) / static_cast<double>(config.n_queried);
  ex["fpr"] = static_cast<double>(fp) / n_out;
  ex["true_positives"] = tp;
  ex["false_positives"] = fp;
  ex["victim_rejections"] = victim_rejections;
  ex["history_size"] = history.size();
  ex["pair_collision_rate"] = pair_rate;
  ex["mean_pair_similarity"] = sim_sum / pairs;
  ex["fpr_collision_bound"] = fpr_bound;
  ex["levels"] = config.fingerprint.levels;
  ex["window"] = config.fingerprint.window;
  ex["threshold"] = config.threshold;
  ex["store_rejected"] = config.store_rejected;
  ex["replay_noise"] = config.replay_noise;
  return report;
}

}  // namespace sclab::queryfilter
