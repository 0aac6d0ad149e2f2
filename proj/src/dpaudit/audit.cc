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

#include "sclab/dpaudit/audit.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/embedding.h"
#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"
#include "sclab/dedup/dedup.h"
#include "sclab/dedup/embedder.h"
#include "sclab/dedup/poison.h"
#include "sclab/mia/classifier.h"
#include "sclab/mia/lira.h"

namespace sclab::dpaudit {
namespace {

constexpr ExampleId kTargetId = 1'000'000;
constexpr ExampleId kDuplicateIdBase = 2'000'000;

enum World { kPresent = 0, kAbsent = 1 };

}  // namespace

void DpAuditConfig::Validate() const {
  dp.Validate();
  SCLAB_REQUIRE(n_duplicates >= 1, "n_duplicates must be >= 1");
  SCLAB_REQUIRE(alpha > 0 && alpha < 1, "alpha must be in (0, 1)");
  SCLAB_REQUIRE(n_duplicates + 1 <= embed_dim,
                "n_duplicates must be <= embed_dim - 1");
  SCLAB_REQUIRE(embed_dim + 1 <= feature_dim,
                "embed_dim must be <= feature_dim - 1");
  SCLAB_REQUIRE(num_classes >= 2, "num_classes must be >= 2");
  SCLAB_REQUIRE(background_size >= 1, "background_size must be >= 1");
  SCLAB_REQUIRE(eval_models >= 1, "eval_models must be >= 1");
  SCLAB_REQUIRE(shadow_models >= 2, "shadow_models must be >= 2");
  SCLAB_REQUIRE(confidence > 0 && confidence < 1,
                "confidence must be in (0, 1)");
}

DpAuditResult RunDpDedupAudit(const DpAuditConfig& config) {
  config.Validate();
  const BlobSpec spec{config.num_classes, config.feature_dim,
                      config.center_lo, config.center_hi, config.noise_std};
  Rng world_rng(SplitSeed(config.seed, "dp_world"));
  const auto centers = MakeBlobCenters(spec, world_rng);
  const Dataset background =
      SampleBlobs(spec, centers, config.background_size, 0, world_rng);
  const int target_label =
      static_cast<int>(world_rng.UniformInt(config.num_classes));
  const FeatureExample target =
      SampleBlobPoint(spec, centers, target_label, kTargetId, world_rng);
  const int bad_label = dedup::Mislabel(target_label, config.num_classes);

  const dedup::LinearEmbedder embedder(config.embed_dim, config.feature_dim,
                                       config.embedder_seed);
  const auto hub = embedder.Embed(target.features);
  const auto spokes =
      dedup::HubSpokeEmbeddings(hub, config.n_duplicates, config.alpha);
  std::vector<FeatureExample> dups(spokes.size());
  ParallelFor(spokes.size(), [&](std::size_t i) {
    dedup::InvertOptions opt;
    opt.steps = config.inversion_steps;
    opt.init = target.features;
    auto inv = dedup::InvertEmbedding(embedder, spokes[i], opt);
    dups[i] = {std::move(inv.features), bad_label,
               kDuplicateIdBase + static_cast<ExampleId>(i)};
  });
  double min_sim = 1.0, max_pair_sim = -1.0;
  {
    std::vector<EmbeddingVector> e;
    for (const auto& d : dups) e.push_back(embedder.Embed(d.features));
    for (std::size_t i = 0; i < e.size(); ++i) {
      min_sim = std::min(min_sim, Dot(hub, e[i]));
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        max_pair_sim = std::max(max_pair_sim, Dot(e[i], e[j]));
      }
    }
  }

  // Fixed pre-filter datasets; the worlds differ only in the target.
  Dataset worlds[2];
  for (int w : {kPresent, kAbsent}) {
    Dataset d = background;
    if (w == kPresent) d.examples.push_back(target);
    for (const auto& p : dups) d.examples.push_back(p);
    if (config.apply_dedup) {
      d = dedup::ApplyPolicy(
          d, dedup::DedupPolicy::Approximate(dedup::Deletion::kDeleteAll,
                                             config.alpha),
          &embedder, SplitSeed(config.seed, "dp_dedup", w));
    }
    worlds[w] = std::move(d);
  }
  std::size_t surviving[2] = {0, 0};
  std::set<ExampleId> ids[2];
  for (int w : {kPresent, kAbsent}) {
    for (const auto& ex : worlds[w].examples) {
      surviving[w] += ex.id >= kDuplicateIdBase;
      ids[w].insert(ex.id);
    }
  }
  std::vector<ExampleId> diff;
  std::set_symmetric_difference(ids[0].begin(), ids[0].end(), ids[1].begin(),
                                ids[1].end(), std::back_inserter(diff));

  // Statistic per model: mean logit-confidence of the mislabeled duplicates,
  // or of the target on its own label in the control.
  const std::size_t per_world = config.shadow_models + config.eval_models;
  std::vector<double> stat(2 * per_world);
  ParallelFor(stat.size(), [&](std::size_t k) {
    const int w = static_cast<int>(k / per_world);
    const auto trained = DpSgdTrain(
        worlds[w], mia::MakeUniformClassifier(config.num_classes,
                                              config.feature_dim),
        config.dp, SplitSeed(config.seed, "dp_model", k));
    if (config.apply_dedup) {
      double s = 0;
      for (const auto& d : dups) {
        s += mia::LogitTransform(trained.model.Confidence(d.features, d.label));
      }
      stat[k] = s / static_cast<double>(dups.size());
    } else {
      stat[k] = mia::LogitTransform(
          trained.model.Confidence(target.features, target.label));
    }
  });

  // "in" = the world where the queried points are trained on.
  const int in_world = config.apply_dedup ? kAbsent : kPresent;
  std::vector<std::vector<double>> in, out;
  for (int w : {kPresent, kAbsent}) {
    for (std::size_t j = 0; j < config.shadow_models; ++j) {
      (w == in_world ? in : out).push_back({stat[w * per_world + j]});
    }
  }
  const auto pair = mia::FitGaussians(in, out);

  DpAuditResult result;
  AttackReport& report = result.report;
  report.scenario_name = "dp_audit";
  report.seed = config.seed;
  long long tp = 0, fn = 0, fp = 0, tn = 0;
  for (int w : {kPresent, kAbsent}) {
    for (std::size_t j = config.shadow_models; j < per_world; ++j) {
      const double v = stat[w * per_world + j];
      const double s = mia::LiraScore(pair, std::span<const double>(&v, 1));
      const double member = config.apply_dedup ? -s : s;
      const bool say_present = member > 0;
      if (w == kPresent) {
        (say_present ? tp : fn) += 1;
      } else {
        (say_present ? fp : tn) += 1;
      }
      report.scores.push_back({member, w == kPresent});
    }
  }
  report.query_count = static_cast<std::int64_t>(
      2 * config.eval_models * (config.apply_dedup ? dups.size() : 1));
  report.ComputeRoc();

  const double rho = ZcdpRho(config.dp.steps, config.dp.noise_multiplier);
  result.accountant = {ZcdpToEps(rho, config.dp.delta), config.dp.delta,
                       BudgetSource::kAccountant, std::nullopt};
  result.empirical = EmpiricalEpsLowerBound(tp, fn, fp, tn, config.dp.delta,
                                            config.confidence);

  Json& ex = report.extra;
  ex["eps_accountant"] = result.accountant.epsilon;
  ex["delta"] = config.dp.delta;
  ex["eps_empirical"] = result.empirical.epsilon;
  ex["confidence"] = config.confidence;
  ex["worlds"] = {{"present", config.eval_models},
                  {"absent", config.eval_models}};
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
  ex["attack_tpr_fpr"] = {{"tpr", tpr}, {"fpr", fpr}};
  ex["counts"] = {{"tp", tp}, {"fn", fn}, {"fp", fp}, {"tn", tn}};
  ex["rho"] = rho;
  ex["accounting"] =
      "full-batch DP-SGD, zCDP composition, converted with "
      "eps = rho + 2 sqrt(rho ln(1/delta)); no subsampling";
  ex["estimator"] = "Clopper-Pearson ratio bound, both directions";
  ex["apply_dedup"] = config.apply_dedup;
  ex["n_duplicates"] = config.n_duplicates;
  ex["alpha"] = config.alpha;
  ex["clip_norm"] = config.dp.clip_norm;
  ex["noise_multiplier"] = config.dp.noise_multiplier;
  ex["steps"] = config.dp.steps;
  ex["shadow_models_per_world"] = config.shadow_models;
  ex["post_filter_difference"] = diff.size();
  ex["eps_group_bound"] =
      static_cast<double>(config.n_duplicates + 1) * result.accountant.epsilon;
  ex["surviving_duplicates"] = {{"present", surviving[kPresent]},
                                {"absent", surviving[kAbsent]}};
  ex["duplicate_target_sim_min"] = min_sim;
  ex["duplicate_pair_sim_max"] = max_pair_sim;
  ex["statistic_means"] = {
      {"in", pair.in.mean(0)}, {"out", pair.out.mean(0)}};
  return result;
}

}  // namespace sclab::dpaudit
