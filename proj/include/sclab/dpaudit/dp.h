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

#ifndef SCLAB_DPAUDIT_DP_H_
#define SCLAB_DPAUDIT_DP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "sclab/core/dataset.h"
#include "sclab/core/report.h"
#include "sclab/mia/classifier.h"

namespace sclab::dpaudit {

inline constexpr double kDefaultDelta = 1e-5;

struct DpConfig {
  double clip_norm = 1.0;
  // Noise stddev is noise_multiplier * clip_norm.
  double noise_multiplier = 50.0;
  std::size_t steps = 100;
  double lr = 4.0;
  double delta = kDefaultDelta;

  // Throws ContractViolation.
  void Validate() const;
};

enum class BudgetSource { kAccountant, kEmpiricalLowerBound };
std::string_view BudgetSourceName(BudgetSource s);

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = kDefaultDelta;
  BudgetSource provenance = BudgetSource::kAccountant;
  // Set for empirical bounds only.
  std::optional<double> confidence;

  Json ToJson() const;
};

// Test hooks. Not for scenarios.
struct DpHooks {
  bool disable_noise = false;
  // Called once per step with the L2 norm of each example's clipped
  // contribution (weights and bias together).
  std::function<void(std::size_t step, std::span<const double> norms)>
      observe_contributions;
};

struct DpTrainResult {
  mia::ToyClassifier model;
  double rho = 0.0;
};

// rho of `steps` full-batch Gaussian steps with unit-sensitivity noise
// multiplier sigma: steps / (2 sigma^2).
double ZcdpRho(std::size_t steps, double noise_multiplier);

// Full-batch DP-SGD on the cross-entropy. Every step clips each per-example
// gradient to clip_norm, sums, adds N(0, (sigma C)^2) to every coordinate,
// divides by the dataset size and steps. The model's feature center is kept
// from `init` so that no statistic of the data enters outside the noisy sum.
DpTrainResult DpSgdTrain(const Dataset& data, const mia::ToyClassifier& init,
                         const DpConfig& config, std::uint64_t seed,
                         const DpHooks* hooks = nullptr);

// eps = rho + 2 sqrt(rho ln(1/delta)). Throws ContractViolation unless
// rho > 0 and 0 < delta < 1.
double ZcdpToEps(double rho, double delta = kDefaultDelta);

// The sigma at which ZcdpToEps(ZcdpRho(steps, sigma), delta) == epsilon.
double NoiseMultiplierForEps(double epsilon, std::size_t steps,
                             double delta = kDefaultDelta);

// ln((tpr_lo - delta) / fpr_hi), or 0 when that is not positive or defined.
double EpsFromBounds(double tpr_lo, double fpr_hi, double delta);

// Lower bound on epsilon from attack counts: the larger of
// ln((TPR_lo - delta) / FPR_hi) and ln((TNR_lo - delta) / FNR_hi), floored at
// 0, with Clopper-Pearson bounds at `confidence` (two-sided intervals, so each
// one-sided bound fails with probability (1 - confidence) / 2 and the pair
// jointly holds with probability >= confidence). A direction whose numerator
// is not positive contributes 0. Throws ContractViolation on empty worlds.
PrivacyBudget EmpiricalEpsLowerBound(long long tp, long long fn, long long fp,
                                     long long tn, double delta,
                                     double confidence);

}  // namespace sclab::dpaudit

#endif  // SCLAB_DPAUDIT_DP_H_
