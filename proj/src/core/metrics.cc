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

#include "sclab/core/metrics.h"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "sclab/core/error.h"

namespace sclab {

RocResult RocAndTpr(std::span<const double> member_scores,
                    std::span<const double> nonmember_scores,
                    std::span<const double> fpr_levels) {
  SCLAB_REQUIRE(!member_scores.empty(), "RocAndTpr: no member scores");
  SCLAB_REQUIRE(!nonmember_scores.empty(), "RocAndTpr: no nonmember scores");

  // (score, is_member), sorted by descending score.
  std::vector<std::pair<double, bool>> all;
  all.reserve(member_scores.size() + nonmember_scores.size());
  for (double s : member_scores) {
    SCLAB_REQUIRE(!std::isnan(s), "RocAndTpr: NaN score");
    all.emplace_back(s, true);
  }
  for (double s : nonmember_scores) {
    SCLAB_REQUIRE(!std::isnan(s), "RocAndTpr: NaN score");
    all.emplace_back(s, false);
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocResult out;
  RocCurve& roc = out.roc;
  roc.n_members = member_scores.size();
  roc.n_nonmembers = nonmember_scores.size();
  const double nm = static_cast<double>(roc.n_members);
  const double nn = static_cast<double>(roc.n_nonmembers);

  roc.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < all.size()) {
    const double tau = all[i].first;
    while (i < all.size() && all[i].first == tau) {
      if (all[i].second) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    roc.points.push_back({fp / nn, tp / nm});
  }

  for (double level : fpr_levels) {
    out.tpr_at_fpr[level] = TprAtFpr(roc, level);
  }
  return out;
}

double TprAtFpr(const RocCurve& roc, double level) {
  double best = 0.0;
  for (const auto& p : roc.points) {
    if (p.fpr <= level) best = std::max(best, p.tpr);
  }
  return best;
}

double RocAuc(const RocCurve& roc) {
  double auc = 0.0;
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return auc;
}

Interval ClopperPearson(long long successes, long long trials,
                        double confidence) {
  SCLAB_REQUIRE(trials > 0, "ClopperPearson: trials must be positive");
  SCLAB_REQUIRE(successes >= 0 && successes <= trials,
                "ClopperPearson: successes outside [0, trials]");
  SCLAB_REQUIRE(confidence > 0.0 && confidence < 1.0,
                "ClopperPearson: confidence outside (0, 1)");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval ci;
  ci.lo = successes == 0
              ? 0.0
              : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
  ci.hi = successes == trials
              ? 1.0
              : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return ci;
}

}  // namespace sclab
