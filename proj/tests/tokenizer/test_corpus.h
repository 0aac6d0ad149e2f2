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

#ifndef SCLAB_TESTS_TOKENIZER_TEST_CORPUS_H_
#define SCLAB_TESTS_TOKENIZER_TEST_CORPUS_H_

#include <string>

#include "sclab/core/rng.h"

namespace sclab::testing_util {

// Words over a small skewed alphabet so that BPE finds many merges of varied
// lengths; separators mix spaces and newlines.
inline std::string RandomWordCorpus(std::uint64_t seed, std::size_t bytes) {
  static constexpr char kAlphabet[] = "aaabbcdeeefghi.,";
  Rng rng(seed);
  std::string s;
  while (s.size() < bytes) {
    const std::size_t len = 1 + rng.UniformInt(7);
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back(kAlphabet[rng.UniformInt(sizeof(kAlphabet) - 1)]);
    }
    s.push_back(rng.UniformInt(8) == 0 ? '\n' : ' ');
  }
  return s;
}

}  // namespace sclab::testing_util

#endif  // SCLAB_TESTS_TOKENIZER_TEST_CORPUS_H_
