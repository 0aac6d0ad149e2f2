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

#ifndef SCLAB_MEMFILTER_NGRAM_H_
#define SCLAB_MEMFILTER_NGRAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "sclab/core/tokens.h"

namespace sclab::memfilter {

inline constexpr int kDefaultOrder = 5;
inline constexpr double kDefaultSmoothing = 0.1;
inline constexpr double kDefaultCacheWeight = 0.9;

struct NGramConfig {
  int order = kDefaultOrder;
  // Add-delta constant.
  double smoothing = kDefaultSmoothing;
  // Weight of the in-context copy distribution when the current context has
  // occurred earlier in the history. 0 disables it.
  double cache_weight = kDefaultCacheWeight;
};

// Order-n token model. The corpus part uses the longest context suffix (at
// most n-1 tokens) seen in training, add-delta smoothed over the vocabulary.
// The in-context part is the empirical next-token distribution after earlier
// occurrences of the longest matching suffix of the history itself; it gives
// repeated patterns in a prompt the pull that lets a prompt coerce the
// continuation.
class NGramLm {
 public:
  explicit NGramLm(NGramConfig config = {});

  // Counts every position of every document. May be called repeatedly.
  void Train(const TokenCorpus& corpus);
  // Extends the vocabulary without adding counts.
  void AddToVocabulary(std::span<const Token> tokens);

  const NGramConfig& config() const { return config_; }
  // Sorted.
  const std::vector<Token>& vocabulary() const { return vocab_; }

  // Probability of every vocabulary token (same order as vocabulary()) after
  // `history`; sums to 1.
  std::vector<double> NextDistribution(std::span<const Token> history) const;

  // Vocabulary sorted by descending probability, ties by ascending id.
  std::vector<Token> RankedNext(std::span<const Token> history) const;

  Token Greedy(std::span<const Token> history) const;

  // Sum of -log p(x_i | x_<i) for i >= 1 under the corpus part only.
  double NegLogLikelihood(std::span<const Token> seq) const;

 private:
  struct Counts {
    std::int64_t total = 0;
    std::unordered_map<Token, std::int64_t> next;
  };
  const Counts* Longest(std::span<const Token> history) const;
  // Empirical next-token counts after earlier matches of the longest suffix
  // of history that recurs; empty if none.
  std::unordered_map<Token, std::int64_t> CacheCounts(
      std::span<const Token> history, std::int64_t* total) const;
  // Unnormalized score parts for a token.
  double Score(Token t, const Counts* ctx,
               const std::unordered_map<Token, std::int64_t>& cache,
               std::int64_t cache_total) const;

  NGramConfig config_;
  std::unordered_map<TokenSeq, Counts, TokenSpanHash> table_;
  std::vector<Token> vocab_;
};

}  // namespace sclab::memfilter

#endif  // SCLAB_MEMFILTER_NGRAM_H_
