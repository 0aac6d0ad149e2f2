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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sclab/cli/scenario.h"
#include "sclab/core/error.h"
#include "sclab/core/report.h"

namespace sclab::cli {
namespace {

std::string UtcNow() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int RunLab(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Side-channel attack scenarios", "lab"};
  bool list = false;
  app.add_flag("--list-scenarios", list, "Print the scenario kinds");
  auto* run = app.add_subcommand("run", "Run one scenario from a JSON config");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed_override;
  run->add_option("--config", config_path, "Scenario config (JSON)")
      ->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed-override", seed_override, "Replace the config seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (list) {
    for (auto k : ScenarioKinds()) out << k << "\n";
    return 0;
  }
  if (!*run) {
    err << app.help();
    return 2;
  }

  Json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      err << "lab: cannot read " << config_path << "\n";
      return 2;
    }
    try {
      config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      err << "lab: malformed JSON in " << config_path << ": " << e.what()
          << "\n";
      return 2;
    }
  }
  if (out_dir.empty()) {
    out_dir = config.is_object() && config.contains("output_dir") &&
                      config["output_dir"].is_string()
                  ? config["output_dir"].get<std::string>()
                  : std::string("out");
  }

  const auto start = std::chrono::steady_clock::now();
  ScenarioOutput result;
  try {
    result = RunScenario(config, seed_override);
  } catch (const ConfigError& e) {
    err << "lab: invalid config:\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    err << "lab: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "lab: scenario failed: " << e.what() << "\n";
    return 1;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.report["timing"] = {{"wall_seconds", seconds},
                             {"finished_at", UtcNow()}};

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto json_path = dir / (result.kind + "_report.json");
    WriteTextFile(json_path, result.report.dump(2) + "\n");
    out << json_path.string() << "\n";
    if (!result.roc_csv.empty()) {
      const auto csv_path = dir / (result.kind + "_roc.csv");
      WriteTextFile(csv_path, result.roc_csv);
      out << csv_path.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "lab: cannot write outputs: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sclab::cli
