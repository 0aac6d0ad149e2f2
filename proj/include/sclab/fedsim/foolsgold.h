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

#ifndef SCLAB_FEDSIM_FOOLSGOLD_H_
#define SCLAB_FEDSIM_FOOLSGOLD_H_

#include <vector>

#include <Eigen/Dense>

namespace sclab::fedsim {

struct SybilScores {
  // v_i in [0, 1].
  std::vector<double> scores;
  // Learning-rate multiplier in [0, 1].
  std::vector<double> multipliers;
};

// v_i = max over j != i of cos(H_i, H_j), clipped to [0, 1]; multiplier
// 1 - v_i. A zero-norm history has similarity 0 with everything.
//
// With `pardoning` the reference-style weighting is used instead: pairwise
// similarities are pardoned by the ratio of max similarities, weights are
// rescaled so the largest is 1 (capped at 0.99), passed through
// ln(w / (1 - w)) + 0.5 and clipped to [0, 1].
// Throws ContractViolation with fewer than two clients or ragged histories.
SybilScores FoolsGoldMultipliers(const std::vector<Eigen::VectorXd>& histories,
                                 bool pardoning = false);

// Cosine similarity; 0 when either vector is zero.
double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace sclab::fedsim

#endif  // SCLAB_FEDSIM_FOOLSGOLD_H_
