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

#ifndef SCLAB_QUERYFILTER_SCENARIO_H_
#define SCLAB_QUERYFILTER_SCENARIO_H_

#include <cstddef>
#include <cstdint>

#include "sclab/core/report.h"
#include "sclab/queryfilter/filter.h"

namespace sclab::queryfilter {

// Benign users submit the queried set; the attacker then replays every point
// of the queried and held-out sets in a shuffled order and reads each
// rejection as "queried".
struct QueryFilterConfig {
  std::size_t n_queried = 1000;
  std::size_t n_heldout = 1000;
  std::size_t dim = 32;
  int num_classes = 10;
  double noise_std = 0.15;
  FingerprintParams fingerprint;
  double threshold = 0.5;
  bool store_rejected = false;
  // Uniform perturbation in [-replay_noise, replay_noise] added to every
  // coordinate of the attacker's probe; 0 is an exact replay.
  double replay_noise = 0.0;
  // Independent pairs for the collision-rate estimate.
  std::size_t collision_pairs = 10000;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Scores are 1 for a rejected probe and 0 otherwise, member = queried. extra
// holds tpr, fpr, the Monte-Carlo pair collision rate and the FPR bound it
// implies (plus three standard errors).
AttackReport RunQueryFilter(const QueryFilterConfig& config);

}  // namespace sclab::queryfilter

#endif  // SCLAB_QUERYFILTER_SCENARIO_H_
