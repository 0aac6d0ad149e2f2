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

#include <gtest/gtest.h>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/tokenizer/bpe.h"
#include "sclab/tokenizer/scenario.h"

namespace sclab::tokenizer {
namespace {

TEST(RandomTrainingText, LengthAndDeterminism) {
  Rng a(3), b(3);
  const std::string s = RandomTrainingText(a, 1000);
  EXPECT_GE(s.size(), 1000u);
  EXPECT_LE(s.size(), 1009u);
  EXPECT_EQ(s, RandomTrainingText(b, 1000));
  EXPECT_GT(TrainBpe(s, 50).merges().size(), 10u);
}

TEST(VocabExtractScenario, SmallRunIsExactAndAudited) {
  VocabExtractConfig c;
  c.n_vocabs = 3;
  c.max_merges = 120;
  c.corpus_bytes = 5000;
  const auto r = RunVocabExtract(c);
  EXPECT_EQ(r.extra["exact_recoveries"], 3);
  EXPECT_TRUE(r.extra["query_counts_match_audit"].get<bool>());
  EXPECT_EQ(r.query_count, r.extra["expected_query_count"].get<std::int64_t>());
  EXPECT_EQ(r.ToJson(), RunVocabExtract(c).ToJson());
  c.max_token_len = 1;
  EXPECT_THROW(RunVocabExtract(c), ContractViolation);
}

}  // namespace
}  // namespace sclab::tokenizer
