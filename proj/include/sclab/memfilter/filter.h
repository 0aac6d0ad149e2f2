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

#ifndef SCLAB_MEMFILTER_FILTER_H_
#define SCLAB_MEMFILTER_FILTER_H_

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sclab/core/tokens.h"
#include "sclab/memfilter/bloom.h"
#include "sclab/memfilter/ngram.h"

namespace sclab::memfilter {

inline constexpr std::size_t kDefaultFilterK = 20;
// Emitted when every candidate next token is blocked.
inline constexpr Token kEndOfOutput = -1;

enum class FilterToggle { kOn, kOff, kPermanent };
std::string_view FilterToggleName(FilterToggle t);

// Set of training k-grams. With fp rate 0 the set is exact; otherwise a Bloom
// filter sized for the rate.
class MemorizationFilter {
 public:
  std::size_t k() const { return k_; }
  FilterToggle toggle() const { return toggle_; }
  void set_toggle(FilterToggle t) { toggle_ = t; }
  bool exact() const { return !bloom_.has_value(); }
  const std::optional<BloomFilter>& bloom() const { return bloom_; }
  std::size_t distinct_kgrams() const { return distinct_; }

  // Membership test for a k-token window, independent of the toggle.
  bool Contains(std::span<const Token> kgram) const;
  // True when the toggle is on or permanent.
  bool Active() const { return toggle_ != FilterToggle::kOff; }

 private:
  friend MemorizationFilter BuildFilter(const TokenCorpus&, std::size_t,
                                        double, FilterToggle);
  std::size_t k_ = kDefaultFilterK;
  FilterToggle toggle_ = FilterToggle::kOn;
  std::size_t distinct_ = 0;
  std::optional<BloomFilter> bloom_;
  std::unordered_set<TokenSeq, TokenSpanHash> exact_;
};

// Inserts every sliding k-gram of every document. Throws ContractViolation on
// an empty corpus or k < 2.
MemorizationFilter BuildFilter(const TokenCorpus& corpus, std::size_t k,
                               double fp_rate,
                               FilterToggle toggle = FilterToggle::kOn);

// The deployed system: a model plus its output filter. Every call to Decode
// counts as one query.
class FilteredLm {
 public:
  FilteredLm(const NGramLm& lm, const MemorizationFilter& filter)
      : lm_(lm), filter_(filter) {}

  // Greedy decoding of up to max_tokens. Before emitting t the trailing
  // k-gram (last k-1 prompt/emitted tokens + t) is tested; when the filter is
  // active and the test is positive the next most likely token is tried. If
  // every token is blocked kEndOfOutput is emitted and decoding stops. Until
  // k-1 tokens of history exist, emissions are unfiltered.
  TokenSeq Decode(std::span<const Token> prompt, std::size_t max_tokens,
                  bool filter_on) const;
  // Uses the filter's own toggle.
  TokenSeq Decode(std::span<const Token> prompt, std::size_t max_tokens) const {
    return Decode(prompt, max_tokens, filter_.Active());
  }

  const NGramLm& lm() const { return lm_; }
  const MemorizationFilter& filter() const { return filter_; }
  std::uint64_t queries() const { return queries_.load(); }

 private:
  const NGramLm& lm_;
  const MemorizationFilter& filter_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

enum class MiVerdict { kMember, kNonmember, kInconclusive };
std::string_view MiVerdictName(MiVerdict v);

struct ToggleResult {
  MiVerdict verdict = MiVerdict::kInconclusive;
  // Length of the prefix that reproduced the target, if any.
  std::optional<std::size_t> prefix_length;
};

// Counterfactual test with a user-controlled toggle. For prefix lengths
// k-1..|target|-1 (then shorter ones), decode the rest with the filter off;
// the first prefix that reproduces the target decides: the filtered decode
// equals it -> nonmember, differs -> member. No reproducing prefix ->
// inconclusive. Throws ContractViolation if the filter is permanent.
ToggleResult MiToggleable(const FilteredLm& system,
                          std::span<const Token> target);

struct PermanentResult {
  MiVerdict verdict = MiVerdict::kNonmember;
  // 1 for member, 0 for nonmember.
  double score = 0;
  TokenSeq output;
};

// Prompt (p || s) repeated r times, then p; the continuation of length |s|
// under the system's toggle differs from s -> member.
PermanentResult MiPermanent(const FilteredLm& system,
                            std::span<const Token> prefix,
                            std::span<const Token> continuation,
                            std::size_t repetitions = 3);

}  // namespace sclab::memfilter

#endif  // SCLAB_MEMFILTER_FILTER_H_
