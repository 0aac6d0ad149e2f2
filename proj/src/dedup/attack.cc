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

#include "sclab/dedup/attack.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"
#include "sclab/dedup/poison.h"
#include "sclab/mia/lira.h"

namespace sclab::dedup {
namespace {

constexpr ExampleId kTargetIdBase = 1'000'000;
constexpr ExampleId kPoisonIdBase = 2'000'000;

// Per-target balanced inclusion: exactly half (rounded down) of n models
// contain the target.
std::vector<std::vector<bool>> BalancedInclusion(std::size_t n_targets,
                                                 std::size_t n_models,
                                                 Rng& rng) {
  std::vector<std::vector<bool>> inc(n_targets,
                                     std::vector<bool>(n_models, false));
  std::vector<std::size_t> order(n_models);
  for (auto& row : inc) {
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(order);
    for (std::size_t k = 0; k < n_models / 2; ++k) row[order[k]] = true;
  }
  return inc;
}

struct ModelOutcome {
  // queries[t] = transformed confidences for target t of the group.
  std::vector<std::vector<double>> queries;
  std::vector<std::size_t> surviving_poisons;
  std::vector<bool> target_survived;
  double train_accuracy = 0.0;
};

}  // namespace

void DedupAttackConfig::Validate() const {
  SCLAB_REQUIRE(n_targets >= 1, "n_targets must be >= 1");
  SCLAB_REQUIRE(shadow_models >= 4, "shadow_models must be >= 4");
  SCLAB_REQUIRE(eval_models >= 2, "eval_models must be >= 2");
  SCLAB_REQUIRE(targets_per_model >= 1, "targets_per_model must be >= 1");
  SCLAB_REQUIRE(subsample_fraction > 0.0 && subsample_fraction <= 1.0,
                "subsample_fraction must be in (0, 1]");
  SCLAB_REQUIRE(data.num_classes >= 2, "num_classes must be >= 2");
  SCLAB_REQUIRE(data.dim >= 2, "feature dim must be >= 2");
  SCLAB_REQUIRE(data.pool_size >= 2, "pool_size must be >= 2");
  SCLAB_REQUIRE(data.center_lo >= 0.0 && data.center_hi <= 1.0 &&
                    data.center_lo <= data.center_hi,
                "blob centers must lie in [0, 1]");
  SCLAB_REQUIRE(data.noise_std >= 0.0, "noise_std must be >= 0");
  SCLAB_REQUIRE(embed_dim >= 1 && embed_dim + 1 <= data.dim,
                "embedder d must be in [1, m - 1]");
  SCLAB_REQUIRE(backdoor_indices.size() == backdoor_values.size(),
                "backdoor indices and values differ in length");
  for (std::size_t i : backdoor_indices) {
    SCLAB_REQUIRE(i < data.dim, "backdoor index out of range");
  }
  for (double v : backdoor_values) {
    SCLAB_REQUIRE(v >= 0.0 && v <= 1.0, "backdoor value outside [0, 1]");
  }
  SCLAB_REQUIRE(inversion_steps >= 1, "inversion_steps must be >= 1");
  if (apply_dedup) {
    policy.Validate();
    SCLAB_REQUIRE(n_duplicates >= 1, "n_duplicates must be >= 1");
    if (policy.mode == DedupMode::kApproximate) {
      SCLAB_REQUIRE(n_duplicates + 1 <= embed_dim,
                    "n_duplicates must be <= d - 1");
      const double ag = alpha_guess.value_or(*policy.alpha);
      SCLAB_REQUIRE(ag > 0.0 && ag < 1.0, "alpha_guess must be in (0, 1)");
    }
  }
}

AttackReport RunDedupAttack(const DedupAttackConfig& config) {
  config.Validate();
  const int num_classes = config.data.num_classes;
  BlobSpec spec{num_classes, config.data.dim, config.data.center_lo,
                config.data.center_hi, config.data.noise_std};
  Rng world(SplitSeed(config.seed, "world"));
  const auto centers = MakeBlobCenters(spec, world);
  const Dataset pool =
      SampleBlobs(spec, centers, config.data.pool_size, 0, world);
  Rng target_rng(SplitSeed(config.seed, "targets"));
  const Dataset targets = SampleBlobs(spec, centers, config.n_targets,
                                      kTargetIdBase, target_rng);
  const LinearEmbedder embedder(config.embed_dim, config.data.dim,
                                config.embedder_seed);
  const bool approximate =
      config.apply_dedup && config.policy.mode == DedupMode::kApproximate;

  // Poisons: mislabeled exact copies, or mislabeled spokes around the target.
  std::vector<std::vector<FeatureExample>> poisons(config.n_targets);
  double min_target_sim = 1.0, max_target_sim = -1.0, max_pair_sim = -1.0;
  std::size_t inversion_warnings = 0;
  if (config.apply_dedup) {
    const double alpha_guess =
        approximate ? config.alpha_guess.value_or(*config.policy.alpha) : 0.0;
    ParallelFor(config.n_targets, [&](std::size_t t) {
      const FeatureExample& x = targets.examples[t];
      const int bad_label = Mislabel(x.label, num_classes);
      auto& out = poisons[t];
      if (!approximate) {
        for (std::size_t i = 0; i < config.n_duplicates; ++i) {
          out.push_back({x.features, bad_label,
                         kPoisonIdBase + static_cast<ExampleId>(
                                             t * config.n_duplicates + i)});
        }
        return;
      }
      const auto hub = embedder.Embed(x.features);
      const auto spokes =
          HubSpokeEmbeddings(hub, config.n_duplicates, alpha_guess);
      for (std::size_t i = 0; i < spokes.size(); ++i) {
        InvertOptions opt;
        opt.steps = config.inversion_steps;
        opt.init = ApplyBackdoor(x.features, config.backdoor_indices,
                                 config.backdoor_values);
        opt.frozen = config.backdoor_indices;
        InversionResult inv = InvertEmbedding(embedder, spokes[i], opt);
        out.push_back(
            {std::move(inv.features), bad_label,
             kPoisonIdBase +
                 static_cast<ExampleId>(t * config.n_duplicates + i)});
      }
    });
    for (std::size_t t = 0; t < config.n_targets; ++t) {
      const auto hub = embedder.Embed(targets.examples[t].features);
      std::vector<EmbeddingVector> e;
      for (const auto& p : poisons[t]) e.push_back(embedder.Embed(p.features));
      for (std::size_t i = 0; i < e.size(); ++i) {
        const double s = Dot(hub, e[i]);
        min_target_sim = std::min(min_target_sim, s);
        max_target_sim = std::max(max_target_sim, s);
        if (approximate && s < kInversionWarnSim) ++inversion_warnings;
        for (std::size_t j = i + 1; j < e.size(); ++j) {
          max_pair_sim = std::max(max_pair_sim, Dot(e[i], e[j]));
        }
      }
    }
  }

  const std::size_t n_models = config.shadow_models + config.eval_models;
  const std::size_t n_groups =
      (config.n_targets + config.targets_per_model - 1) /
      config.targets_per_model;
  mia::TrainConfig train = config.train;
  train.num_classes = num_classes;

  AttackReport report;
  report.scenario_name = "dedup_attack";
  report.seed = config.seed;
  double surv_present = 0, surv_absent = 0, target_kept_present = 0;
  double n_present = 0, n_absent = 0, acc_sum = 0;

  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t first = g * config.targets_per_model;
    const std::size_t last =
        std::min(config.n_targets, first + config.targets_per_model);
    const std::size_t group_size = last - first;
    Rng inc_rng(SplitSeed(config.seed, "inclusion", g));
    const auto shadow_inc =
        BalancedInclusion(group_size, config.shadow_models, inc_rng);
    const auto eval_inc =
        BalancedInclusion(group_size, config.eval_models, inc_rng);
    auto included = [&](std::size_t t, std::size_t model) {
      return model < config.shadow_models
                 ? shadow_inc[t][model]
                 : eval_inc[t][model - config.shadow_models];
    };

    std::vector<ModelOutcome> outcomes(n_models);
    ParallelFor(n_models, [&](std::size_t j) {
      const std::uint64_t model_seed =
          SplitSeed(config.seed, "model", g * n_models + j);
      Rng rng(SplitSeed(model_seed, "subsample"));
      Dataset ds;
      for (const auto& ex : pool.examples) {
        if (rng.Bernoulli(config.subsample_fraction)) ds.examples.push_back(ex);
      }
      for (std::size_t t = 0; t < group_size; ++t) {
        if (included(t, j)) ds.examples.push_back(targets.examples[first + t]);
      }
      ModelOutcome& mo = outcomes[j];
      mo.surviving_poisons.assign(group_size, 0);
      mo.target_survived.assign(group_size, false);
      if (config.apply_dedup) {
        for (std::size_t t = 0; t < group_size; ++t) {
          for (const auto& p : poisons[first + t]) ds.examples.push_back(p);
        }
        ds.provenance = Provenance::kPoisoned;
        ds = ApplyPolicy(ds, config.policy, &embedder,
                         SplitSeed(model_seed, "dedup"));
        for (const auto& ex : ds.examples) {
          if (ex.id >= kPoisonIdBase) {
            const auto t = static_cast<std::size_t>(ex.id - kPoisonIdBase) /
                               config.n_duplicates -
                           first;
            ++mo.surviving_poisons[t];
          } else if (ex.id >= kTargetIdBase) {
            mo.target_survived[static_cast<std::size_t>(ex.id - kTargetIdBase) -
                               first] = true;
          }
        }
      }
      const auto model = mia::TrainClassifier(ds, train, model_seed);
      mo.train_accuracy = mia::Accuracy(model, ds);
      mo.queries.resize(group_size);
      for (std::size_t t = 0; t < group_size; ++t) {
        const FeatureExample& x = targets.examples[first + t];
        if (config.apply_dedup) {
          for (const auto& p : poisons[first + t]) {
            mo.queries[t].push_back(
                mia::LogitTransform(model.Confidence(p.features, p.label)));
          }
        } else {
          mo.queries[t].push_back(
              mia::LogitTransform(model.Confidence(x.features, x.label)));
        }
      }
    });

    for (std::size_t t = 0; t < group_size; ++t) {
      // "in" = world where the queried points are in the training data.
      std::vector<std::vector<double>> in, out;
      for (std::size_t j = 0; j < config.shadow_models; ++j) {
        const bool present = included(t, j);
        const bool queried_in = config.apply_dedup ? !present : present;
        (queried_in ? in : out).push_back(outcomes[j].queries[t]);
      }
      const auto pair = mia::FitGaussians(in, out);
      for (std::size_t j = config.shadow_models; j < n_models; ++j) {
        const double s = mia::LiraScore(pair, outcomes[j].queries[t]);
        const bool present = included(t, j);
        report.scores.push_back(
            {config.apply_dedup ? mia::NonmemberToMemberDecision(s) : s,
             present});
        report.query_count +=
            static_cast<std::int64_t>(outcomes[j].queries[t].size());
      }
      for (std::size_t j = 0; j < n_models; ++j) {
        if (included(t, j)) {
          surv_present += outcomes[j].surviving_poisons[t];
          target_kept_present += outcomes[j].target_survived[t];
          ++n_present;
        } else {
          surv_absent += outcomes[j].surviving_poisons[t];
          ++n_absent;
        }
      }
    }
    for (const auto& mo : outcomes) acc_sum += mo.train_accuracy;
  }

  report.ComputeRoc();
  Json& ex = report.extra;
  ex["auc"] = RocAuc(report.roc);
  ex["n_scores"] = report.scores.size();
  ex["apply_dedup"] = config.apply_dedup;
  if (config.apply_dedup) {
    ex["mode"] = DedupModeName(config.policy.mode);
    ex["deletion"] = DeletionName(config.policy.deletion);
    if (config.policy.alpha) ex["alpha"] = *config.policy.alpha;
    if (approximate) {
      ex["alpha_guess"] = config.alpha_guess.value_or(*config.policy.alpha);
    }
    ex["n_duplicates"] = config.n_duplicates;
    ex["mean_surviving_duplicates_target_present"] =
        n_present > 0 ? surv_present / n_present : 0.0;
    ex["mean_surviving_duplicates_target_absent"] =
        n_absent > 0 ? surv_absent / n_absent : 0.0;
    ex["target_survival_rate_when_present"] =
        n_present > 0 ? target_kept_present / n_present : 0.0;
    ex["duplicate_target_sim_min"] = min_target_sim;
    ex["duplicate_target_sim_max"] = max_target_sim;
    if (config.n_duplicates > 1) ex["duplicate_pair_sim_max"] = max_pair_sim;
    ex["inversion_warnings"] = inversion_warnings;
    ex["survivor_rule"] = "uniform by seed within each component";
    ex["lira_in_world"] = "target absent (duplicates kept)";
  } else {
    ex["lira_in_world"] = "target present";
  }
  ex["shadow_models"] = config.shadow_models;
  ex["eval_models"] = config.eval_models;
  ex["targets_per_model"] = config.targets_per_model;
  ex["confidence_transform"] = "logit";
  ex["mean_train_accuracy"] =
      acc_sum / static_cast<double>(n_groups * n_models);
  return report;
}

}  // namespace sclab::dedup
