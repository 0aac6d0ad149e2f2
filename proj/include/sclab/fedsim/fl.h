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

#ifndef SCLAB_FEDSIM_FL_H_
#define SCLAB_FEDSIM_FL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sclab/core/dataset.h"
#include "sclab/core/report.h"
#include "sclab/mia/classifier.h"

namespace sclab::fedsim {

enum class Defense { kNone, kFoolsGold };
std::string_view DefenseName(Defense d);
Defense ParseDefense(std::string_view name);

struct FlClient {
  int id = 0;
  Dataset data;
  bool is_attacker = false;
  // First round the client submits an update.
  std::size_t join_round = 0;
  // Sum of every delta this client submitted.
  Eigen::VectorXd update_history;
};

struct FlOptions {
  std::size_t rounds = 40;
  double lr = 0.2;
  Defense defense = Defense::kFoolsGold;
  bool pardoning = false;
};

struct FlRun {
  // Global model after each round; models[0] is the initial model.
  std::vector<mia::ToyClassifier> models;
  // loss_traces[c][r]: mean loss of models[r] on client c's own data.
  std::vector<std::vector<double>> loss_traces;
  // multipliers[r][c]: weight of client c in round r (0 before it joins).
  std::vector<std::vector<double>> multipliers;
};

// Every round each joined client takes one full-batch gradient step from the
// global model on its own data; the server adds multiplier * delta for every
// joined client, folding in client-id order. A client with multiplier 0 thus
// leaves no trace in the model. `init` sets the shape.
FlRun RunFl(std::vector<FlClient>& clients, const mia::ToyClassifier& init,
            const FlOptions& options);

// Flattened (weights row-major, then bias).
Eigen::VectorXd Flatten(const mia::ToyClassifier& m);

struct MembershipScore {
  double score = 0.0;
  // True when score > threshold.
  bool absent = false;
};

// score = mean(loss[join - window, join)) - mean(loss[join, join + window)).
// Throws ContractViolation when the trace is too short or join < window.
MembershipScore ClientMembershipAttack(std::span<const double> loss_trace,
                                       std::size_t join_round,
                                       std::size_t window = 15,
                                       double threshold = 0.0);

// The FoolsGold client-membership scenario. Each run has n_clients benign
// clients, client c holding mostly class c; the target is the client whose
// majority class is target_class. The attacker joins at join_round with data
// from the target's class.
struct FoolsGoldConfig {
  std::size_t n_clients = 5;
  int classes = 5;
  std::size_t dim = 32;
  std::size_t examples_per_client = 90;
  double majority_fraction = 0.8;
  double dirichlet_alpha = 1.0;
  std::size_t attacker_examples = 50;
  std::size_t join_round = 20;
  std::size_t window = 15;
  std::size_t rounds = 40;
  double lr = 0.2;
  double noise_std = 0.15;
  double center_lo = 0.35;
  double center_hi = 0.65;
  Defense defense = Defense::kFoolsGold;
  bool pardoning = false;
  std::vector<int> target_classes = {0, 2};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  // Seeds whose runs set the side-channel threshold; disjoint from `seeds`.
  std::vector<std::uint64_t> calibration_seeds = {100, 101, 102, 103, 104,
                                                  105, 106, 107, 108, 109};
  std::uint64_t seed = 0;

  void Validate() const;
};

// Attacker-side observations of one run.
struct FoolsGoldRun {
  std::vector<double> attacker_trace;
  double side_channel_score = 0.0;
  // Mean attacker loss over [join, join + window): the baseline's statistic.
  double loss_level = 0.0;
};

FoolsGoldRun RunFoolsGoldOnce(const FoolsGoldConfig& config,
                              std::uint64_t run_seed, int target_class,
                              bool target_present);

// Side channel: threshold at the midpoint of the mean present and mean absent
// scores over the calibration seeds. Baseline: threshold on the loss level at
// the midpoint of the present and absent means over the evaluation runs
// themselves. Scores in the report are the side-channel scores with
// member = target present.
AttackReport RunFoolsGoldAttack(const FoolsGoldConfig& config);

}  // namespace sclab::fedsim

#endif  // SCLAB_FEDSIM_FL_H_
