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

#ifndef SCLAB_FEDSIM_CLUSTERING_H_
#define SCLAB_FEDSIM_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/report.h"

namespace sclab::fedsim {

inline constexpr int kKMeansIterations = 50;

struct KMeansResult {
  std::vector<FeatureVector> centers;
  // Cluster of each point.
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> sizes;
};

// k-means++ initial centers drawn with the seed.
std::vector<FeatureVector> KMeansPlusPlusInit(
    const std::vector<FeatureVector>& points, std::size_t k,
    std::uint64_t seed);

// Lloyd iterations from fixed centers. Ties go to the lower cluster index;
// an empty cluster keeps its previous center.
KMeansResult Lloyd(const std::vector<FeatureVector>& points,
                   std::vector<FeatureVector> centers,
                   int iterations = kKMeansIterations);

// Seeded k-means++ then Lloyd. Throws ContractViolation if k > n or k == 0.
KMeansResult KMeans(const std::vector<FeatureVector>& points, std::size_t k,
                    std::uint64_t seed, int iterations = kKMeansIterations);

// Which clusters the defense drops.
enum class ClusterPolarity {
  // Clusters smaller than T are removed (the defense as described).
  kRemoveSmall,
  // Clusters of size >= T are removed.
  kRemoveLarge,
};

struct ClusterFilterResult {
  // Indices of retained points, ascending.
  std::vector<std::size_t> retained;
  KMeansResult clusters;
};

ClusterFilterResult ActivationClusterFilter(
    const std::vector<FeatureVector>& representations, std::size_t k,
    std::size_t threshold, std::uint64_t seed,
    ClusterPolarity polarity = ClusterPolarity::kRemoveSmall);

// Planted-copy attack. Each trial draws a random half of the pool, picks a
// target from the pool (present iff it landed in the half), adds T-1 copies
// and clusters. The copies' cluster holding >= T points means "present".
struct ActivationClusteringConfig {
  std::size_t trials = 50;
  std::size_t pool_size = 2000;
  int classes = 10;
  std::size_t dim = 16;
  double noise_std = 0.15;
  std::size_t k = 100;
  std::size_t threshold = 11;
  ClusterPolarity polarity = ClusterPolarity::kRemoveSmall;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Scores: copy-cluster size, member = target present. extra reports the
// nonmember error count (present targets called absent), membership
// precision and whether the defense kept the copies.
AttackReport RunActivationClustering(const ActivationClusteringConfig& config);

}  // namespace sclab::fedsim

#endif  // SCLAB_FEDSIM_CLUSTERING_H_
