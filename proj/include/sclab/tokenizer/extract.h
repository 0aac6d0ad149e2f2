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

#ifndef SCLAB_TOKENIZER_EXTRACT_H_
#define SCLAB_TOKENIZER_EXTRACT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sclab/tokenizer/bpe.h"
#include "sclab/tokenizer/oracle.h"

namespace sclab::tokenizer {

// What the attacker knows about the deployment.
struct ProbeSetup {
  std::size_t window = kDefaultWindow;
  ProbeSentence probe;
};

// Repetitions R of " " + candidate in the padding. With a single-token
// candidate the prompt holds at most F + 2R + 1 tokens, otherwise at least
// F + 3R + 1, where F counts the fixed question/answer tokens (between 2 and
// their byte length). R is the largest count keeping the first case in the
// window; throws ConfigError when the second case would still fit.
std::size_t ProbeRepetitions(const ProbeSetup& setup);

// Padding used to test whether `candidate` is a single token.
std::string CandidatePadding(std::string_view candidate,
                             std::size_t repetitions);

struct VocabExtraction {
  // Recovered tokens; merges are recorded in discovery order, not the hidden
  // training order.
  Vocabulary vocab;
  std::uint64_t query_count = 0;
  // Queries issued while searching for tokens of length t (index t).
  std::vector<std::uint64_t> queries_by_length;
};

// Breadth-first by length: round t probes every u||v with u, v recovered and
// |u| + |v| = t, for every split. Whitespace bytes never merge and are not
// candidates.
VocabExtraction ExtractVocabulary(ProbeOracle& oracle, const ProbeSetup& setup,
                                  std::size_t max_token_len);

// Closed-form query count of ExtractVocabulary for a vocabulary whose
// non-whitespace tokens of length a number counts[a]:
// sum over t in [2, L] and a in [1, t) of counts[a] * counts[t - a].
std::uint64_t ExpectedExtractionQueries(const std::vector<std::string>& tokens,
                                        std::size_t max_token_len);

// Token strings of `vocab` with length <= max_len, sorted.
std::vector<std::string> TokensUpTo(const Vocabulary& vocab,
                                    std::size_t max_len);

struct TokenizationExtraction {
  std::vector<std::string> segmentation;
  // Tokens of length >= 2 found inside the target, in discovery order.
  std::vector<std::string> recovered;
  std::uint64_t query_count = 0;
};

// Probes only pairs whose concatenation occurs inside a word of the target.
// The segmentation applies the recovered tokens as merges in discovery order
// (shorter first). Counts cannot reveal merge priority between overlapping
// tokens, so it matches the hidden tokenization only where that order does
// not matter.
TokenizationExtraction ExtractTokenization(ProbeOracle& oracle,
                                           const ProbeSetup& setup,
                                           std::string_view target);

}  // namespace sclab::tokenizer

#endif  // SCLAB_TOKENIZER_EXTRACT_H_
