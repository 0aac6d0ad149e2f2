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

#ifndef SCLAB_DEDUP_ATTACK_H_
#define SCLAB_DEDUP_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/report.h"
#include "sclab/dedup/dedup.h"
#include "sclab/mia/classifier.h"

namespace sclab::dedup {

// Synthetic blob world shared by every model of a run.
struct BlobWorldConfig {
  std::size_t dim = 48;
  int num_classes = 10;
  // Candidate training points; each model trains on a random subsample.
  std::size_t pool_size = 800;
  double noise_std = 0.15;
  double center_lo = 0.35;
  double center_hi = 0.65;
};

struct DedupAttackConfig {
  std::size_t n_targets = 250;
  std::size_t n_duplicates = 1;
  // When false no poisons are inserted and no filter runs: the report is the
  // plain likelihood-ratio attack on the target's own label.
  bool apply_dedup = true;
  DedupPolicy policy;
  // Similarity used to build the spokes; defaults to the policy's alpha.
  std::optional<double> alpha_guess;
  std::size_t embed_dim = 16;
  std::uint64_t embedder_seed = 1;
  std::vector<std::size_t> backdoor_indices;
  std::vector<double> backdoor_values;
  std::size_t shadow_models = 64;
  // Victim models; each target is a member of exactly half of them.
  std::size_t eval_models = 8;
  // Targets sharing one set of models. Smaller groups mean fewer foreign
  // poisons competing for the classifier's capacity, at the cost of more
  // trainings.
  std::size_t targets_per_model = 10;
  double subsample_fraction = 0.5;
  BlobWorldConfig data;
  mia::TrainConfig train{.epochs = 150, .lr = 4.0, .center_features = true};
  int inversion_steps = 1000;
  std::uint64_t seed = 0;

  // Throws ContractViolation describing the first problem.
  void Validate() const;
};

AttackReport RunDedupAttack(const DedupAttackConfig& config);

}  // namespace sclab::dedup

#endif  // SCLAB_DEDUP_ATTACK_H_
