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

#include "sclab/queryfilter/retrieval.h"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "sclab/core/error.h"

namespace sclab::queryfilter {

std::set<std::vector<std::string>> TokenNgrams(std::string_view text,
                                               std::size_t n) {
  SCLAB_REQUIRE(n >= 1, "n-gram order must be >= 1");
  std::istringstream in{std::string(text)};
  const std::vector<std::string> toks{std::istream_iterator<std::string>(in),
                                      std::istream_iterator<std::string>()};
  std::set<std::vector<std::string>> grams;
  if (toks.empty()) return grams;
  if (toks.size() < n) {
    grams.insert(toks);
    return grams;
  }
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    grams.emplace(toks.begin() + i, toks.begin() + i + n);
  }
  return grams;
}

namespace {

double Jaccard(const std::set<std::vector<std::string>>& a,
               const std::set<std::vector<std::string>>& b) {
  std::size_t shared = 0;
  for (const auto& g : a) shared += b.count(g);
  const std::size_t uni = a.size() + b.size() - shared;
  return uni == 0 ? 0.0
                  : static_cast<double>(shared) / static_cast<double>(uni);
}

}  // namespace

double NgramJaccard(std::string_view a, std::string_view b, std::size_t n) {
  return Jaccard(TokenNgrams(a, n), TokenNgrams(b, n));
}

bool RetrievalCheck(const std::vector<std::string>& output_log,
                    std::string_view text, double threshold, std::size_t n) {
  SCLAB_REQUIRE(threshold > 0 && threshold <= 1,
                "retrieval threshold must be in (0, 1]");
  const auto q = TokenNgrams(text, n);
  return std::any_of(output_log.begin(), output_log.end(),
                     [&](const std::string& logged) {
                       return Jaccard(q, TokenNgrams(logged, n)) >= threshold;
                     });
}

}  // namespace sclab::queryfilter
