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

#include "sclab/fedsim/clustering.h"

#include <algorithm>
#include <limits>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"

namespace sclab::fedsim {
namespace {

double Dist2(const FeatureVector& a, const FeatureVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t Nearest(const FeatureVector& p,
                    const std::vector<FeatureVector>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = Dist2(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<FeatureVector> KMeansPlusPlusInit(
    const std::vector<FeatureVector>& points, std::size_t k,
    std::uint64_t seed) {
  SCLAB_REQUIRE(k >= 1 && k <= points.size(), "k-means needs 1 <= k <= n");
  Rng rng(seed);
  std::vector<FeatureVector> centers;
  centers.push_back(points[rng.UniformInt(points.size())]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    d2[i] = Dist2(points[i], centers[0]);
  }
  while (centers.size() < k) {
    double total = 0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total <= 0) {
      // Every point sits on a center already.
      pick = rng.UniformInt(points.size());
    } else {
      double u = rng.Uniform() * total;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (u < d2[i]) {
          pick = i;
          break;
        }
        u -= d2[i];
      }
    }
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], Dist2(points[i], centers.back()));
    }
  }
  return centers;
}

KMeansResult Lloyd(const std::vector<FeatureVector>& points,
                   std::vector<FeatureVector> centers, int iterations) {
  SCLAB_REQUIRE(!centers.empty() && !points.empty(), "Lloyd: empty input");
  const std::size_t k = centers.size(), dim = points[0].size();
  KMeansResult r;
  r.assignment.assign(points.size(), 0);
  for (int it = 0; it <= iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = Nearest(points[i], centers);
      changed |= c != r.assignment[i];
      r.assignment[i] = c;
    }
    if (it == iterations || (it > 0 && !changed)) break;
    std::vector<FeatureVector> sums(k, FeatureVector(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& s = sums[r.assignment[i]];
      for (std::size_t j = 0; j < dim; ++j) s[j] += points[i][j];
      ++counts[r.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
  }
  r.sizes.assign(k, 0);
  for (std::size_t a : r.assignment) ++r.sizes[a];
  r.centers = std::move(centers);
  return r;
}

KMeansResult KMeans(const std::vector<FeatureVector>& points, std::size_t k,
                    std::uint64_t seed, int iterations) {
  return Lloyd(points, KMeansPlusPlusInit(points, k, seed), iterations);
}

ClusterFilterResult ActivationClusterFilter(
    const std::vector<FeatureVector>& representations, std::size_t k,
    std::size_t threshold, std::uint64_t seed, ClusterPolarity polarity) {
  ClusterFilterResult out;
  out.clusters = KMeans(representations, k, seed);
  for (std::size_t i = 0; i < representations.size(); ++i) {
    const bool large = out.clusters.sizes[out.clusters.assignment[i]] >= threshold;
    if (large == (polarity == ClusterPolarity::kRemoveSmall)) {
      out.retained.push_back(i);
    }
  }
  return out;
}

void ActivationClusteringConfig::Validate() const {
  SCLAB_REQUIRE(trials >= 1, "trials must be >= 1");
  SCLAB_REQUIRE(threshold >= 2, "threshold must be >= 2");
  SCLAB_REQUIRE(classes >= 1 && dim >= 1, "classes and dim must be >= 1");
  SCLAB_REQUIRE(pool_size >= 2, "pool_size must be >= 2");
  SCLAB_REQUIRE(k >= 1 && k <= pool_size / 2 + threshold - 1,
                "k must be in [1, n]");
}

AttackReport RunActivationClustering(const ActivationClusteringConfig& config) {
  config.Validate();
  Rng world(SplitSeed(config.seed, "clustering_world"));
  const BlobSpec spec{config.classes, config.dim, 0.2, 0.8, config.noise_std};
  const auto centers = MakeBlobCenters(spec, world);
  const Dataset pool = SampleBlobs(spec, centers, config.pool_size, 0, world);

  struct Trial {
    bool present = false;
    std::size_t copy_cluster = 0;
    bool copies_kept = false;
  };
  std::vector<Trial> trials(config.trials);
  ParallelFor(config.trials, [&](std::size_t t) {
    Rng rng(SplitSeed(config.seed, "clustering_trial", t));
    const auto half = rng.SampleWithoutReplacement(config.pool_size,
                                                   config.pool_size / 2);
    const std::size_t target = rng.UniformInt(config.pool_size);
    std::vector<FeatureVector> reps;
    for (std::size_t i : half) {
      reps.push_back(pool.examples[i].features);
      trials[t].present |= i == target;
    }
    const std::size_t first_copy = reps.size();
    for (std::size_t c = 0; c + 1 < config.threshold; ++c) {
      reps.push_back(pool.examples[target].features);
    }
    const ClusterFilterResult f = ActivationClusterFilter(
        reps, config.k, config.threshold,
        SplitSeed(config.seed, "kmeans", t), config.polarity);
    const std::size_t cluster = f.clusters.assignment[first_copy];
    trials[t].copy_cluster = f.clusters.sizes[cluster];
    trials[t].copies_kept = std::binary_search(f.retained.begin(),
                                               f.retained.end(), first_copy);
  });

  AttackReport report;
  report.scenario_name = "activation_clustering";
  report.seed = config.seed;
  std::size_t tp = 0, fp = 0, nonmember_errors = 0, present = 0;
  Json per_trial = Json::array();
  for (const auto& t : trials) {
    // Copies kept under remove-small, or removed under remove-large, both
    // mean the cluster reached T.
    const bool kept_means_large = config.polarity == ClusterPolarity::kRemoveSmall;
    const bool say_present = t.copies_kept == kept_means_large;
    present += t.present;
    tp += say_present && t.present;
    fp += say_present && !t.present;
    nonmember_errors += !say_present && t.present;
    report.scores.push_back({static_cast<double>(t.copy_cluster), t.present});
    per_trial.push_back({{"present", t.present},
                         {"copy_cluster_size", t.copy_cluster},
                         {"copies_kept", t.copies_kept},
                         {"predicted_present", say_present}});
  }
  if (present > 0 && present < trials.size()) report.ComputeRoc();
  report.query_count = static_cast<std::int64_t>(config.trials);
  report.extra["polarity"] = config.polarity == ClusterPolarity::kRemoveSmall
                                 ? "remove_small"
                                 : "remove_large";
  report.extra["targets_present"] = present;
  report.extra["nonmember_errors"] = nonmember_errors;
  report.extra["membership_precision"] =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                  : 0.0;
  report.extra["true_positives"] = tp;
  report.extra["false_positives"] = fp;
  report.extra["per_trial"] = std::move(per_trial);
  return report;
}

}  // namespace sclab::fedsim
