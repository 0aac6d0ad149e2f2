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

#ifndef SCLAB_QUERYFILTER_RETRIEVAL_H_
#define SCLAB_QUERYFILTER_RETRIEVAL_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sclab::queryfilter {

inline constexpr std::size_t kDefaultRetrievalN = 3;

// Distinct whitespace-token n-grams of the text. A text with fewer than n
// tokens (but at least one) yields its whole token sequence as one gram.
std::set<std::vector<std::string>> TokenNgrams(std::string_view text,
                                               std::size_t n);

// |A & B| / |A | B| over token n-gram sets; 0 when both are empty.
double NgramJaccard(std::string_view a, std::string_view b,
                    std::size_t n = kDefaultRetrievalN);

// True iff some logged generation has Jaccard >= threshold with `text`.
// Throws ContractViolation unless 0 < threshold <= 1 and n >= 1.
bool RetrievalCheck(const std::vector<std::string>& output_log,
                    std::string_view text, double threshold,
                    std::size_t n = kDefaultRetrievalN);

}  // namespace sclab::queryfilter

#endif  // SCLAB_QUERYFILTER_RETRIEVAL_H_
