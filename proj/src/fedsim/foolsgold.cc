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

#include "sclab/fedsim/foolsgold.h"

#include <algorithm>
#include <cmath>

#include "sclab/core/error.h"

namespace sclab::fedsim {

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

SybilScores FoolsGoldMultipliers(const std::vector<Eigen::VectorXd>& histories,
                                 bool pardoning) {
  const std::size_t n = histories.size();
  SCLAB_REQUIRE(n >= 2, "FoolsGold needs at least two clients");
  for (const auto& h : histories) {
    SCLAB_REQUIRE(h.size() == histories[0].size(),
                  "FoolsGold histories differ in dimension");
  }
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cs(i, j) = cs(j, i) = Cosine(histories[i], histories[j]);
    }
  }
  std::vector<double> maxcs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double m = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) m = std::max(m, cs(i, j));
    }
    maxcs[i] = m;
  }

  SybilScores out;
  out.scores.resize(n);
  out.multipliers.resize(n);
  if (!pardoning) {
    for (std::size_t i = 0; i < n; ++i) {
      out.scores[i] = std::clamp(maxcs[i], 0.0, 1.0);
      out.multipliers[i] = 1.0 - out.scores[i];
    }
    return out;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && maxcs[i] < maxcs[j] && maxcs[j] > 0) {
        cs(i, j) *= maxcs[i] / maxcs[j];
      }
    }
  }
  std::vector<double> wv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) m = std::max(m, cs(i, j));
    }
    out.scores[i] = std::clamp(m, 0.0, 1.0);
    wv[i] = std::clamp(1.0 - m, 0.0, 1.0);
  }
  const double top = *std::max_element(wv.begin(), wv.end());
  for (std::size_t i = 0; i < n; ++i) {
    double w = top > 0 ? wv[i] / top : 0.0;
    w = std::min(w, 0.99);
    const double logit = w <= 0 ? -INFINITY : std::log(w / (1 - w)) + 0.5;
    out.multipliers[i] = std::clamp(logit, 0.0, 1.0);
  }
  return out;
}

}  // namespace sclab::fedsim
