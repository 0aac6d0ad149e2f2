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

#ifndef SCLAB_TOKENIZER_SCENARIO_H_
#define SCLAB_TOKENIZER_SCENARIO_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "sclab/core/report.h"
#include "sclab/core/rng.h"

namespace sclab::tokenizer {

// Random words over a random skewed alphabet of 6 to 40 printable bytes,
// separated by spaces and the odd newline.
std::string RandomTrainingText(Rng& rng, std::size_t bytes);

// Each of n_vocabs hidden vocabularies is trained on its own random text with
// a merge budget drawn uniformly from [1, max_merges], then extracted through
// a simulated context-window oracle wrapped in a call counter.
struct VocabExtractConfig {
  std::size_t n_vocabs = 100;
  std::size_t max_merges = 500;
  std::size_t corpus_bytes = 20000;
  std::size_t max_token_len = 4;
  std::size_t window = 128;
  std::uint64_t seed = 0;

  void Validate() const;
};

// One score per vocabulary: 1 when every token up to max_token_len was
// recovered exactly, member = true. query_count is the audited oracle-call
// total; extra also holds the closed-form count and per-vocabulary rows.
AttackReport RunVocabExtract(const VocabExtractConfig& config);

}  // namespace sclab::tokenizer

#endif  // SCLAB_TOKENIZER_SCENARIO_H_
