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

#ifndef SCLAB_TEXTDEDUP_KGRAM_H_
#define SCLAB_TEXTDEDUP_KGRAM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sclab/core/tokens.h"

namespace sclab::textdedup {

inline constexpr std::size_t kDefaultK = 50;

struct KgramDedupOptions {
  // Only windows already seen in an earlier document count as repeats.
  bool cross_document_only = false;
};

struct KgramDedupStats {
  std::size_t deletions = 0;
  std::size_t tokens_removed = 0;
};

// Scans documents in order, then positions in order. A window that repeats an
// earlier window of the current corpus has its k tokens deleted and the
// document re-joined; the windows disturbed by the splice are re-scanned. A
// single pass therefore reaches the fixpoint: the output has no repeated
// k-gram and the first occurrence of every window survives.
TokenCorpus KgramDedup(const TokenCorpus& corpus, std::size_t k,
                       const KgramDedupOptions& options = {},
                       KgramDedupStats* stats = nullptr);

// Number of k-gram windows that occur more than once (brute force).
std::size_t CountRepeatedKgrams(const TokenCorpus& corpus, std::size_t k,
                                bool cross_document_only = false);

struct PoisonFamily {
  std::size_t index = 0;
  TokenSeq marker_a;
  TokenSeq marker_b;
  Token candidate = 0;
  // k strings; string j (1-based) is A + S_j..S_{k-1} X S_{k+1}..S_{k+j-1} + B.
  std::vector<TokenSeq> strings;

  TokenSeq Collapsed() const;
};

struct MarkerSpace {
  // Marker tokens are drawn from [first, first + size).
  Token first = 1 << 24;
  Token size = 1 << 20;
};

// Builds one family per candidate; needs k >= 3. Markers have |A| = max(1, (k-1)/2) and
// |B| = k - 1 - |A| tokens, all distinct and disjoint from the corpus, the
// sentence tokens and the candidates. If the post-hoc check finds a repeated
// k-gram among the N*k strings, markers are redrawn from the next seed.
std::vector<PoisonFamily> BuildPoisonFamilies(
    std::span<const Token> pre_tokens, std::span<const Token> post_tokens,
    std::span<const Token> candidates, std::size_t k,
    std::uint64_t marker_seed, const TokenCorpus* corpus = nullptr,
    const MarkerSpace& space = {});

struct AttributeGuess {
  std::size_t index = 0;
  std::vector<double> losses;
  // True when the minimum loss was shared by several families.
  bool tie = false;
};

// argmin over families of loss(A_i + B_i); ties go to the lowest index.
AttributeGuess InferAttribute(
    const std::function<double(std::span<const Token>)>& loss_oracle,
    std::span<const PoisonFamily> families);

}  // namespace sclab::textdedup

#endif  // SCLAB_TEXTDEDUP_KGRAM_H_
