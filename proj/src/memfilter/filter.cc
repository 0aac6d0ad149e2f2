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

#include "sclab/memfilter/filter.h"

#include <algorithm>

#include "sclab/core/error.h"

namespace sclab::memfilter {

std::string_view FilterToggleName(FilterToggle t) {
  switch (t) {
    case FilterToggle::kOn:
      return "on";
    case FilterToggle::kOff:
      return "off";
    case FilterToggle::kPermanent:
      return "permanent";
  }
  return "?";
}

std::string_view MiVerdictName(MiVerdict v) {
  switch (v) {
    case MiVerdict::kMember:
      return "member";
    case MiVerdict::kNonmember:
      return "nonmember";
    case MiVerdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

bool MemorizationFilter::Contains(std::span<const Token> kgram) const {
  SCLAB_REQUIRE(kgram.size() == k_, "filter lookup needs exactly k tokens");
  if (bloom_) return bloom_->Contains(kgram);
  return exact_.count(TokenSeq(kgram.begin(), kgram.end())) != 0;
}

MemorizationFilter BuildFilter(const TokenCorpus& corpus, std::size_t k,
                               double fp_rate, FilterToggle toggle) {
  SCLAB_REQUIRE(k >= 2, "BuildFilter: k must be >= 2");
  SCLAB_REQUIRE(corpus.TotalTokens() > 0, "BuildFilter: empty corpus");
  SCLAB_REQUIRE(fp_rate >= 0 && fp_rate < 1, "BuildFilter: fp rate in [0, 1)");
  MemorizationFilter f;
  f.k_ = k;
  f.toggle_ = toggle;
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i + k <= doc.size(); ++i) {
      f.exact_.emplace(doc.begin() + i, doc.begin() + i + k);
    }
  }
  f.distinct_ = f.exact_.size();
  if (fp_rate > 0 && f.distinct_ > 0) {
    const BloomSizing s = SizeBloom(f.distinct_, fp_rate);
    BloomFilter bloom(s.bits, s.hashes, static_cast<std::uint32_t>(k));
    for (const auto& g : f.exact_) bloom.Insert(g);
    f.bloom_ = std::move(bloom);
    f.exact_.clear();
  }
  return f;
}

TokenSeq FilteredLm::Decode(std::span<const Token> prompt,
                            std::size_t max_tokens, bool filter_on) const {
  SCLAB_REQUIRE(!prompt.empty(), "Decode: empty prompt");
  queries_.fetch_add(1);
  const std::size_t k = filter_.k();
  TokenSeq history(prompt.begin(), prompt.end());
  TokenSeq out;
  TokenSeq window(k);
  for (std::size_t step = 0; step < max_tokens; ++step) {
    const bool can_block = filter_on && history.size() >= k - 1;
    Token chosen = kEndOfOutput;
    if (!can_block) {
      chosen = lm_.Greedy(history);
    } else {
      std::copy(history.end() - (k - 1), history.end(), window.begin());
      for (Token t : lm_.RankedNext(history)) {
        window[k - 1] = t;
        if (!filter_.Contains(window)) {
          chosen = t;
          break;
        }
      }
    }
    out.push_back(chosen);
    if (chosen == kEndOfOutput) break;
    history.push_back(chosen);
  }
  return out;
}

ToggleResult MiToggleable(const FilteredLm& system,
                          std::span<const Token> target) {
  SCLAB_REQUIRE(system.filter().toggle() != FilterToggle::kPermanent,
                "MiToggleable: the filter cannot be switched off");
  ToggleResult r;
  const std::size_t n = target.size();
  const std::size_t k = system.filter().k();
  if (n < 2) return r;
  std::vector<std::size_t> lengths;
  for (std::size_t i = std::max<std::size_t>(1, k - 1); i < n; ++i) {
    lengths.push_back(i);
  }
  for (std::size_t i = std::min(n, k - 1); i-- > 1;) lengths.push_back(i);
  for (std::size_t i : lengths) {
    auto prefix = target.first(i);
    auto rest = target.subspan(i);
    TokenSeq off = system.Decode(prefix, rest.size(), false);
    if (!std::equal(off.begin(), off.end(), rest.begin(), rest.end())) continue;
    TokenSeq on = system.Decode(prefix, rest.size(), true);
    r.prefix_length = i;
    r.verdict = on == off ? MiVerdict::kNonmember : MiVerdict::kMember;
    return r;
  }
  return r;
}

PermanentResult MiPermanent(const FilteredLm& system,
                            std::span<const Token> prefix,
                            std::span<const Token> continuation,
                            std::size_t repetitions) {
  SCLAB_REQUIRE(repetitions >= 2, "MiPermanent: r must be >= 2");
  SCLAB_REQUIRE(!prefix.empty() && !continuation.empty(),
                "MiPermanent: empty prefix or continuation");
  TokenSeq prompt;
  prompt.reserve((prefix.size() + continuation.size()) * repetitions +
                 prefix.size());
  for (std::size_t i = 0; i < repetitions; ++i) {
    prompt.insert(prompt.end(), prefix.begin(), prefix.end());
    prompt.insert(prompt.end(), continuation.begin(), continuation.end());
  }
  prompt.insert(prompt.end(), prefix.begin(), prefix.end());
  PermanentResult r;
  r.output = system.Decode(prompt, continuation.size());
  const bool same = std::equal(r.output.begin(), r.output.end(),
                               continuation.begin(), continuation.end());
  r.verdict = same ? MiVerdict::kNonmember : MiVerdict::kMember;
  r.score = same ? 0.0 : 1.0;
  return r;
}

}  // namespace sclab::memfilter
