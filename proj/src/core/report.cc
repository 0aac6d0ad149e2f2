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

#include "sclab/core/report.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sclab/core/error.h"

namespace sclab {

std::string FprKey(double level) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), level,
                           std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

void AttackReport::ComputeRoc(std::span<const double> levels) {
  std::vector<double> in, out;
  for (const auto& s : scores) (s.member ? in : out).push_back(s.score);
  RocResult r = RocAndTpr(in, out, levels);
  roc = std::move(r.roc);
  tpr_at_fpr = std::move(r.tpr_at_fpr);
}

Json AttackReport::ToJson() const {
  Json j;
  j["scenario_name"] = scenario_name;
  j["seed"] = seed;
  Json roc_json;
  roc_json["n_members"] = roc.n_members;
  roc_json["n_nonmembers"] = roc.n_nonmembers;
  Json pts = Json::array();
  for (const auto& p : roc.points) pts.push_back({p.fpr, p.tpr});
  roc_json["points"] = std::move(pts);
  j["roc"] = std::move(roc_json);
  Json tpr = Json::object();
  for (const auto& [level, value] : tpr_at_fpr) tpr[FprKey(level)] = value;
  j["tpr_at_fpr"] = std::move(tpr);
  j["query_count"] = query_count;
  j["extra"] = extra;
  Json sc = Json::array();
  for (const auto& s : scores) sc.push_back({{"score", s.score}, {"member", s.member}});
  j["scores"] = std::move(sc);
  return j;
}

std::string AttackReport::RocCsv() const {
  std::ostringstream os;
  os.precision(17);
  os << "fpr,tpr\n";
  for (const auto& p : roc.points) os << p.fpr << ',' << p.tpr << '\n';
  return os.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << text;
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sclab
