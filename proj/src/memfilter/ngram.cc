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

#include "sclab/memfilter/ngram.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sclab/core/error.h"

namespace sclab::memfilter {

NGramLm::NGramLm(NGramConfig config) : config_(config) {
  SCLAB_REQUIRE(config_.order >= 1, "NGramLm: order must be >= 1");
  SCLAB_REQUIRE(config_.smoothing > 0, "NGramLm: smoothing must be > 0");
  SCLAB_REQUIRE(config_.cache_weight >= 0 && config_.cache_weight < 1,
                "NGramLm: cache weight must be in [0, 1)");
}

void NGramLm::Train(const TokenCorpus& corpus) {
  const std::size_t max_ctx = static_cast<std::size_t>(config_.order - 1);
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      for (std::size_t j = 0; j <= std::min(max_ctx, i); ++j) {
        Counts& c = table_[TokenSeq(doc.begin() + (i - j), doc.begin() + i)];
        ++c.total;
        ++c.next[doc[i]];
      }
    }
    AddToVocabulary(doc);
  }
}

void NGramLm::AddToVocabulary(std::span<const Token> tokens) {
  vocab_.insert(vocab_.end(), tokens.begin(), tokens.end());
  std::sort(vocab_.begin(), vocab_.end());
  vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
}

const NGramLm::Counts* NGramLm::Longest(std::span<const Token> history) const {
  const std::size_t max_ctx = std::min<std::size_t>(config_.order - 1,
                                                    history.size());
  TokenSeq key;
  for (std::size_t j = max_ctx + 1; j-- > 0;) {
    key.assign(history.end() - j, history.end());
    auto it = table_.find(key);
    if (it != table_.end() && it->second.total > 0) return &it->second;
  }
  return nullptr;
}

std::unordered_map<Token, std::int64_t> NGramLm::CacheCounts(
    std::span<const Token> history, std::int64_t* total) const {
  std::unordered_map<Token, std::int64_t> counts;
  *total = 0;
  if (config_.cache_weight == 0 || history.size() < 2) return counts;
  const std::size_t max_ctx = std::min<std::size_t>(config_.order - 1,
                                                    history.size() - 1);
  for (std::size_t len = max_ctx; len >= 1; --len) {
    auto suffix = history.subspan(history.size() - len);
    for (std::size_t p = 0; p + len < history.size(); ++p) {
      if (!std::equal(suffix.begin(), suffix.end(), history.begin() + p)) {
        continue;
      }
      const Token t = history[p + len];
      if (!std::binary_search(vocab_.begin(), vocab_.end(), t)) continue;
      ++counts[t];
      ++*total;
    }
    if (*total > 0) return counts;
  }
  return counts;
}

double NGramLm::Score(Token t, const Counts* ctx,
                      const std::unordered_map<Token, std::int64_t>& cache,
                      std::int64_t cache_total) const {
  const double v = static_cast<double>(vocab_.size());
  double p;
  if (ctx == nullptr) {
    p = 1.0 / v;
  } else {
    auto it = ctx->next.find(t);
    const double c = it == ctx->next.end() ? 0.0 : static_cast<double>(it->second);
    p = (c + config_.smoothing) /
        (static_cast<double>(ctx->total) + config_.smoothing * v);
  }
  if (cache_total == 0) return p;
  auto it = cache.find(t);
  const double q = it == cache.end()
                       ? 0.0
                       : static_cast<double>(it->second) /
                             static_cast<double>(cache_total);
  return (1 - config_.cache_weight) * p + config_.cache_weight * q;
}

std::vector<double> NGramLm::NextDistribution(
    std::span<const Token> history) const {
  SCLAB_REQUIRE(!vocab_.empty(), "NGramLm: empty vocabulary");
  const Counts* ctx = Longest(history);
  std::int64_t cache_total = 0;
  auto cache = CacheCounts(history, &cache_total);
  std::vector<double> out(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out[i] = Score(vocab_[i], ctx, cache, cache_total);
  }
  return out;
}

std::vector<Token> NGramLm::RankedNext(std::span<const Token> history) const {
  const std::vector<double> p = NextDistribution(history);
  std::vector<std::size_t> order(vocab_.size());
  std::iota(order.begin(), order.end(), 0);
  // vocab_ is sorted, so a stable sort keeps ascending ids among ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  std::vector<Token> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = vocab_[order[i]];
  return out;
}

Token NGramLm::Greedy(std::span<const Token> history) const {
  const std::vector<double> p = NextDistribution(history);
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return vocab_[best];
}

double NGramLm::NegLogLikelihood(std::span<const Token> seq) const {
  SCLAB_REQUIRE(!vocab_.empty(), "NGramLm: empty vocabulary");
  double nll = 0;
  const std::unordered_map<Token, std::int64_t> no_cache;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const Counts* ctx = Longest(seq.first(i));
    nll -= std::log(Score(seq[i], ctx, no_cache, 0));
  }
  return nll;
}

}  // namespace sclab::memfilter
