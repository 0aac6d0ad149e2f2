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

#include "sclab/dpaudit/dp.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sclab/core/error.h"
#include "sclab/core/metrics.h"
#include "sclab/core/rng.h"

namespace sclab::dpaudit {

void DpConfig::Validate() const {
  SCLAB_REQUIRE(clip_norm > 0, "clip_norm must be > 0");
  SCLAB_REQUIRE(noise_multiplier > 0, "noise_multiplier must be > 0");
  SCLAB_REQUIRE(steps >= 1, "steps must be >= 1");
  SCLAB_REQUIRE(lr > 0, "lr must be > 0");
  SCLAB_REQUIRE(delta > 0 && delta < 1, "delta must be in (0, 1)");
}

std::string_view BudgetSourceName(BudgetSource s) {
  return s == BudgetSource::kAccountant ? "accountant"
                                        : "empirical_lower_bound";
}

Json PrivacyBudget::ToJson() const {
  Json j;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["provenance"] = BudgetSourceName(provenance);
  if (confidence) j["confidence"] = *confidence;
  return j;
}

double ZcdpRho(std::size_t steps, double noise_multiplier) {
  SCLAB_REQUIRE(noise_multiplier > 0, "noise_multiplier must be > 0");
  return static_cast<double>(steps) / (2.0 * noise_multiplier * noise_multiplier);
}

double ZcdpToEps(double rho, double delta) {
  SCLAB_REQUIRE(rho > 0, "rho must be > 0");
  SCLAB_REQUIRE(delta > 0 && delta < 1, "delta must be in (0, 1)");
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

double NoiseMultiplierForEps(double epsilon, std::size_t steps, double delta) {
  SCLAB_REQUIRE(epsilon > 0, "epsilon must be > 0");
  SCLAB_REQUIRE(steps >= 1, "steps must be >= 1");
  // rho + 2 sqrt(rho L) = eps is a quadratic in sqrt(rho).
  const double l = std::log(1.0 / delta);
  const double s = -std::sqrt(l) + std::sqrt(l + epsilon);
  const double rho = s * s;
  return std::sqrt(static_cast<double>(steps) / (2.0 * rho));
}

DpTrainResult DpSgdTrain(const Dataset& data, const mia::ToyClassifier& init,
                         const DpConfig& config, std::uint64_t seed,
                         const DpHooks* hooks) {
  config.Validate();
  SCLAB_REQUIRE(data.size() > 0, "DP-SGD needs data");
  SCLAB_REQUIRE(data.FeatureDim() == init.dim(),
                "DP-SGD: feature dimension mismatch");
  DpTrainResult out;
  out.model = init;
  mia::ToyClassifier& m = out.model;
  const mia::RowMatrix x = mia::CenteredMatrix(data, m.center);
  const Eigen::Index n = x.rows(), c = m.num_classes();
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = data.examples[i].label;
    SCLAB_REQUIRE(y >= 0 && y < c, "DP-SGD: label out of range");
    onehot(i, y) = 1.0;
  }
  // ||grad_i||^2 = ||p_i - y_i||^2 (||x_i||^2 + 1) for this model.
  const Eigen::VectorXd x_norm2 = x.rowwise().squaredNorm().array() + 1.0;
  const double noise_std = config.noise_multiplier * config.clip_norm;
  const bool noisy = hooks == nullptr || !hooks->disable_noise;
  Rng rng(seed);
  std::vector<double> norms(n);
  for (std::size_t step = 0; step < config.steps; ++step) {
    Eigen::MatrixXd z = x * m.weights.transpose();
    z.rowwise() += m.bias.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mx = z.row(i).maxCoeff();
      z.row(i) = (z.row(i).array() - mx).exp();
      z.row(i) /= z.row(i).sum();
    }
    Eigen::MatrixXd r = z - onehot;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = std::sqrt(r.row(i).squaredNorm() * x_norm2(i));
      const double scale = g > config.clip_norm ? config.clip_norm / g : 1.0;
      r.row(i) *= scale;
      norms[i] = g * scale;
    }
    if (hooks && hooks->observe_contributions) {
      hooks->observe_contributions(step, norms);
    }
    Eigen::MatrixXd gw = r.transpose() * x;
    Eigen::VectorXd gb = r.colwise().sum().transpose();
    if (noisy) {
      for (Eigen::Index a = 0; a < gw.size(); ++a) {
        gw.data()[a] += rng.Normal(0.0, noise_std);
      }
      for (Eigen::Index a = 0; a < gb.size(); ++a) {
        gb(a) += rng.Normal(0.0, noise_std);
      }
    }
    const double f = config.lr / static_cast<double>(n);
    m.weights -= f * gw;
    m.bias -= f * gb;
  }
  out.rho = ZcdpRho(config.steps, config.noise_multiplier);
  return out;
}

double EpsFromBounds(double tpr_lo, double fpr_hi, double delta) {
  const double num = tpr_lo - delta;
  if (num <= 0 || fpr_hi <= 0) return 0.0;
  return std::max(0.0, std::log(num / fpr_hi));
}

PrivacyBudget EmpiricalEpsLowerBound(long long tp, long long fn, long long fp,
                                     long long tn, double delta,
                                     double confidence) {
  SCLAB_REQUIRE(tp >= 0 && fn >= 0 && fp >= 0 && tn >= 0,
                "counts must be >= 0");
  SCLAB_REQUIRE(tp + fn > 0 && fp + tn > 0, "both worlds need trials");
  SCLAB_REQUIRE(delta >= 0 && delta < 1, "delta must be in [0, 1)");
  const Interval tpr = ClopperPearson(tp, tp + fn, confidence);
  const Interval fpr = ClopperPearson(fp, fp + tn, confidence);
  // The exact interval keeps FPR_hi and FNR_hi = 1 - TPR_lo strictly
  // positive even at zero observed errors.
  PrivacyBudget b;
  b.epsilon = std::max({0.0, EpsFromBounds(tpr.lo, fpr.hi, delta),
                           EpsFromBounds(1.0 - fpr.hi, 1.0 - tpr.lo, delta)});
  b.delta = delta;
  b.provenance = BudgetSource::kEmpiricalLowerBound;
  b.confidence = confidence;
  return b;
}

}  // namespace sclab::dpaudit
