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

#ifndef SCLAB_CORE_REPORT_H_
#define SCLAB_CORE_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sclab/core/metrics.h"

namespace sclab {

using Json = nlohmann::ordered_json;

// The FPR levels every membership report carries.
inline constexpr double kReportFprLevels[] = {0.001, 0.0001};

struct ScoredTarget {
  double score = 0.0;
  bool member = false;
};

struct AttackReport {
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::vector<ScoredTarget> scores;
  RocCurve roc;
  std::map<double, double> tpr_at_fpr;
  std::int64_t query_count = 0;
  // Scenario-specific results.
  Json extra = Json::object();

  // Fills roc and tpr_at_fpr from scores. Needs both classes present.
  void ComputeRoc(std::span<const double> levels = kReportFprLevels);

  // Deterministic content only; wall-clock data is attached separately under
  // the "timing" key by the caller.
  Json ToJson() const;

  // Two-column "fpr,tpr" CSV with header.
  std::string RocCsv() const;
};

// Shortest decimal form of a level, e.g. 0.001 -> "0.001".
std::string FprKey(double level);

// Writes text atomically-ish: to a temporary sibling, then renamed.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace sclab

#endif  // SCLAB_CORE_REPORT_H_
