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

#ifndef SCLAB_MEMFILTER_SECRET_H_
#define SCLAB_MEMFILTER_SECRET_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclab/core/rng.h"
#include "sclab/core/tokens.h"
#include "sclab/memfilter/filter.h"
#include "sclab/tokenizer/bpe.h"

namespace sclab::memfilter {

// Token frequencies over a reference corpus, sorted by descending frequency
// (ties by ascending id). Frequencies sum to 1.
struct TokenPrior {
  std::vector<Token> tokens;
  std::vector<double> freq;

  double Frequency(Token t) const;
};

// Tokenizes the reference text with `vocab` and normalizes the counts.
// Throws ContractViolation on empty text.
TokenPrior BuildPrior(std::string_view reference_text,
                      const tokenizer::Vocabulary& vocab);

// `alphabet` ordered by descending prior frequency, ties by ascending id.
// Throws ContractViolation when no alphabet token has prior mass.
std::vector<Token> PriorOrder(std::span<const Token> alphabet,
                              const TokenPrior& prior);

struct SecretSearchOptions {
  std::uint64_t max_queries = 1'000'000;
  // Longest extension explored before a branch counts as a dead end.
  std::size_t max_length = 256;
  std::size_t repetitions = 3;
};

struct SecretExtraction {
  // Tokens after the known prefix, terminator included when complete.
  TokenSeq tokens;
  bool complete = false;
  bool budget_exhausted = false;
  std::uint64_t queries = 0;
  // Accepted nodes later abandoned as dead ends.
  std::uint64_t backtracks = 0;
};

// Depth-first search over next tokens in prior order. A candidate c after
// path x is accepted when MiPermanent(last k-1 tokens of x, [c]) reports a
// member; a node with no accepted candidate is a dead end and the search
// backtracks. Stops at the first accepted terminator.
// Needs |known_prefix| >= k-1 and every alphabet token in the model's
// vocabulary (otherwise the prompt cannot coerce it).
SecretExtraction ExtractSecret(const FilteredLm& system,
                               std::span<const Token> known_prefix,
                               std::span<const Token> alphabet,
                               const TokenPrior& prior, Token terminator,
                               const SecretSearchOptions& options = {});

inline constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

// Uniform base-64 characters; a newline after every `line_length` characters
// when line_length > 0.
std::string RandomBase64(Rng& rng, std::size_t chars,
                         std::size_t line_length = 0);

// Lower-case syllable words with some capitals, digits and punctuation.
std::string PseudoEnglish(Rng& rng, std::size_t bytes);

}  // namespace sclab::memfilter

#endif  // SCLAB_MEMFILTER_SECRET_H_
