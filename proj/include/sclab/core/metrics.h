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

#ifndef SCLAB_CORE_METRICS_H_
#define SCLAB_CORE_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace sclab {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  // Sorted by fpr, starting at (0, 0) and ending at (1, 1).
  std::vector<RocPoint> points;
  std::size_t n_members = 0;
  std::size_t n_nonmembers = 0;
};

struct RocResult {
  RocCurve roc;
  std::map<double, double> tpr_at_fpr;
};

// Threshold sweep over the distinct scores. A score >= threshold predicts
// "member"; tied scores enter together. The TPR reported for a level is the
// largest TPR of any curve point whose FPR does not exceed it.
RocResult RocAndTpr(std::span<const double> member_scores,
                    std::span<const double> nonmember_scores,
                    std::span<const double> fpr_levels);

double TprAtFpr(const RocCurve& roc, double level);

// Area under the ROC curve by trapezoids.
double RocAuc(const RocCurve& roc);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact two-sided binomial interval from Beta quantiles.
Interval ClopperPearson(long long successes, long long trials,
                        double confidence);

}  // namespace sclab

#endif  // SCLAB_CORE_METRICS_H_
