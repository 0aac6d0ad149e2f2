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

#ifndef SCLAB_DEDUP_POISON_H_
#define SCLAB_DEDUP_POISON_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/embedding.h"
#include "sclab/dedup/embedder.h"

namespace sclab::dedup {

// n unit vectors, each at cosine alpha from `target` and at cosine alpha^2
// from each other. Built as e_i = alpha * b_1 + sqrt(1 - alpha^2) * b_{i+1}
// in the standard basis and carried onto `target` by the Householder
// reflection that maps b_1 to target. Throws CapacityError if n > d - 1 and
// ContractViolation unless 0 < alpha < 1 and target is unit norm.
std::vector<EmbeddingVector> HubSpokeEmbeddings(
    std::span<const double> target, std::size_t n, double alpha);

struct InvertOptions {
  int steps = 1000;
  double step_size = 0.05;
  // Starting point; defaults to the box midpoint.
  std::optional<FeatureVector> init;
  // Coordinates held fixed at their current value (e.g. a backdoor patch).
  std::vector<std::size_t> frozen;
};

struct InversionResult {
  FeatureVector features;
  double achieved_sim = 0.0;
  // Set when achieved_sim < 0.9.
  std::optional<std::string> warning;
};

inline constexpr double kInversionWarnSim = 0.9;

// Finds x in [0,1]^m maximizing cos(h(x), target). Linear embedders start from
// the closed-form preimage nearest the starting point (slid along the
// all-ones direction when that is embedding-neutral); the result is then
// refined by projected gradient ascent. Never throws for unreachable targets.
InversionResult InvertEmbedding(const Embedder& embedder,
                                std::span<const double> target,
                                const InvertOptions& options);

// Overwrites x[indices[k]] = values[k]. Throws ContractViolation on bad
// indices or mismatched lengths.
FeatureVector ApplyBackdoor(std::span<const double> x,
                            std::span<const std::size_t> indices,
                            std::span<const double> values);

// (y + 1) mod C.
inline int Mislabel(int label, int num_classes) {
  return (label + 1) % num_classes;
}

}  // namespace sclab::dedup

#endif  // SCLAB_DEDUP_POISON_H_
