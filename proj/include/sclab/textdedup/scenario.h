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

#ifndef SCLAB_TEXTDEDUP_SCENARIO_H_
#define SCLAB_TEXTDEDUP_SCENARIO_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sclab/core/report.h"
#include "sclab/core/tokens.h"
#include "sclab/memfilter/ngram.h"
#include "sclab/textdedup/kgram.h"

namespace sclab::textdedup {

struct TextAttrConfig {
  std::size_t n_candidates = 10;
  std::size_t k = 5;
  std::size_t trials = 20;
  // Background documents of uniform random word ids.
  std::size_t background_docs = 200;
  std::size_t background_doc_tokens = 100;
  std::size_t word_vocab = 1000;
  memfilter::NGramConfig lm;
  std::uint64_t seed = 0;

  void Validate() const;
};

// One attack instance: the victim corpus (background plus the secret
// sentence, shuffled) followed by the poison documents.
struct TextAttrTrial {
  TokenCorpus corpus;
  TokenCorpus deduplicated;
  std::vector<PoisonFamily> families;
  std::size_t true_index = 0;
};

// Builds trial `trial` of the config: random candidates, a random secret
// sentence of 2k-1 words whose middle word is candidate `true_index`.
TextAttrTrial BuildTextAttrTrial(const TextAttrConfig& config,
                                 std::size_t trial);

// Family i collapsed to A_i + B_i in `dedup` iff i is the true index.
bool CollapseMatchesTruth(const TextAttrTrial& t);

// Trains the n-gram model on the deduplicated corpus and returns the guess.
AttributeGuess AttackTrial(const TextAttrTrial& t,
                           const memfilter::NGramConfig& lm);

// Scores: 1 for a correct guess, all marked as members; no ROC.
AttackReport RunTextAttr(const TextAttrConfig& config);

}  // namespace sclab::textdedup

#endif  // SCLAB_TEXTDEDUP_SCENARIO_H_
