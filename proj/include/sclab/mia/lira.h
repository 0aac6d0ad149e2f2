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

#ifndef SCLAB_MIA_LIRA_H_
#define SCLAB_MIA_LIRA_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sclab/core/report.h"

namespace sclab::mia {

inline constexpr double kCovRegularization = 1e-4;

// A multivariate Gaussian with a cached Cholesky factor.
struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  // True when too few samples forced a diagonal covariance.
  bool diagonal = false;

  double LogDensity(std::span<const double> x) const;
};

struct GaussianPair {
  Gaussian in;
  Gaussian out;
};

// Maximum-likelihood fit plus lambda * I. Falls back to a diagonal covariance
// when there are fewer than dim + 1 samples. Throws ContractViolation for
// fewer than two samples or ragged input.
Gaussian FitGaussian(const std::vector<std::vector<double>>& samples,
                     double lambda = kCovRegularization);

GaussianPair FitGaussians(const std::vector<std::vector<double>>& in_vectors,
                          const std::vector<std::vector<double>>& out_vectors,
                          double lambda = kCovRegularization);

// log N(query; in) - log N(query; out). Throws NumericalError when a
// covariance is not positive definite.
double LiraScore(const GaussianPair& pair, std::span<const double> query);

// Non-membership of the duplicates in the filtered data is membership of the
// original target: the score is negated.
inline double NonmemberToMemberDecision(double duplicate_lira_score) {
  return -duplicate_lira_score;
}

// Which targets a shadow model was trained with.
struct ShadowManifest {
  std::uint64_t seed = 0;
  std::vector<bool> inclusion;

  Json ToJson() const;
  static ShadowManifest FromJson(const Json& j);
};

}  // namespace sclab::mia

#endif  // SCLAB_MIA_LIRA_H_
