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

#ifndef SCLAB_CLI_SCENARIO_H_
#define SCLAB_CLI_SCENARIO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sclab/core/report.h"

namespace sclab::cli {

inline constexpr std::string_view kModuleVersion = "0.1.0";

// The nine scenario kinds, in a fixed order.
std::span<const std::string_view> ScenarioKinds();

struct ScenarioOutput {
  std::string kind;
  // Deterministic report: AttackReport fields plus module_version, kind,
  // config_hash, config and deviations. No timing.
  Json report;
  // Empty when the scenario produced no ROC.
  std::string roc_csv;
};

// A config is {"kind": ..., "seed": u64, "output_dir": str (optional),
// "params": {...}}; params fields are the scenario config's fields by name,
// nested structs as objects. Unknown or ill-typed fields, a bad kind and
// failed validation are all collected and thrown as one ConfigError.
ScenarioOutput RunScenario(const Json& config,
                           std::optional<std::uint64_t> seed_override = {});

// Stable hash of the experiment-defining part of the config (everything but
// output_dir), as 16 hex digits.
std::string ConfigHash(const Json& config);

// `lab` entry point. Exit codes: 0 success, 2 bad command line, unreadable
// or malformed config, or failed validation (no output written), 1 any other
// failure.
int RunLab(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sclab::cli

#endif  // SCLAB_CLI_SCENARIO_H_
