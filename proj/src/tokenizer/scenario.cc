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

#include "sclab/tokenizer/scenario.h"

#include <vector>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/tokenizer/bpe.h"
#include "sclab/tokenizer/extract.h"
#include "sclab/tokenizer/oracle.h"

namespace sclab::tokenizer {

std::string RandomTrainingText(Rng& rng, std::size_t bytes) {
  std::vector<char> printable;
  for (int c = 0x21; c < 0x7f; ++c) printable.push_back(static_cast<char>(c));
  rng.Shuffle(printable);
  const std::size_t n = 6 + rng.UniformInt(35);
  // Letter i drawn with weight proportional to 1 / (i + 1).
  std::vector<double> cdf(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) cdf[i] = total += 1.0 / (i + 1);
  std::string s;
  while (s.size() < bytes) {
    const std::size_t len = 1 + rng.UniformInt(8);
    for (std::size_t i = 0; i < len; ++i) {
      const double u = rng.Uniform() * total;
      std::size_t k = 0;
      while (k + 1 < n && cdf[k] <= u) ++k;
      s.push_back(printable[k]);
    }
    s.push_back(rng.UniformInt(10) == 0 ? '\n' : ' ');
  }
  return s;
}

void VocabExtractConfig::Validate() const {
  SCLAB_REQUIRE(n_vocabs >= 1, "n_vocabs must be >= 1");
  SCLAB_REQUIRE(max_merges >= 1, "max_merges must be >= 1");
  SCLAB_REQUIRE(corpus_bytes >= 1, "corpus_bytes must be >= 1");
  SCLAB_REQUIRE(max_token_len >= 2, "max_token_len must be >= 2");
}

AttackReport RunVocabExtract(const VocabExtractConfig& config) {
  config.Validate();
  struct Row {
    std::size_t merges = 0;
    std::size_t hidden_tokens = 0;
    bool exact = false;
    std::uint64_t queries = 0;
    std::uint64_t audited = 0;
    std::uint64_t expected = 0;
  };
  std::vector<Row> rows(config.n_vocabs);
  ParallelFor(config.n_vocabs, [&](std::size_t v) {
    Rng rng(SplitSeed(config.seed, "vocab", v));
    const std::size_t budget = 1 + rng.UniformInt(config.max_merges);
    const Vocabulary hidden =
        TrainBpe(RandomTrainingText(rng, config.corpus_bytes), budget);
    SimulatedContextOracle oracle(hidden, config.window);
    CountingOracle counter(oracle);
    ProbeSetup setup;
    setup.window = config.window;
    const auto got = ExtractVocabulary(counter, setup, config.max_token_len);
    Row& r = rows[v];
    r.merges = hidden.merges().size();
    r.hidden_tokens = TokensUpTo(hidden, config.max_token_len).size();
    r.exact = TokensUpTo(got.vocab, config.max_token_len) ==
              TokensUpTo(hidden, config.max_token_len);
    r.queries = got.query_count;
    r.audited = counter.calls();
    r.expected = ExpectedExtractionQueries(hidden.tokens(), config.max_token_len);
  });

  AttackReport report;
  report.scenario_name = "vocab_extract";
  report.seed = config.seed;
  std::size_t exact = 0;
  bool counts_match = true;
  std::uint64_t expected = 0;
  Json per_vocab = Json::array();
  for (const Row& r : rows) {
    exact += r.exact;
    counts_match &= r.queries == r.audited && r.audited == r.expected;
    report.query_count += static_cast<std::int64_t>(r.audited);
    expected += r.expected;
    report.scores.push_back({r.exact ? 1.0 : 0.0, true});
    per_vocab.push_back({{"merges", r.merges},
                         {"tokens_up_to_max_len", r.hidden_tokens},
                         {"exact", r.exact},
                         {"queries", r.queries},
                         {"audited_queries", r.audited},
                         {"expected_queries", r.expected}});
  }
  Json& ex = report.extra;
  ex["n_vocabs"] = config.n_vocabs;
  ex["exact_recoveries"] = exact;
  ex["query_counts_match_audit"] = counts_match;
  ex["expected_query_count"] = expected;
  ex["max_token_len"] = config.max_token_len;
  ex["window"] = config.window;
  ex["per_vocab"] = std::move(per_vocab);
  return report;
}

}  // namespace sclab::tokenizer
