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

#include "sclab/textdedup/scenario.h"

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"

namespace sclab::textdedup {

void TextAttrConfig::Validate() const {
  SCLAB_REQUIRE(n_candidates >= 1, "n_candidates must be >= 1");
  SCLAB_REQUIRE(k >= 3, "k must be >= 3");
  SCLAB_REQUIRE(trials >= 1, "trials must be >= 1");
  SCLAB_REQUIRE(word_vocab >= n_candidates + 2 * k,
                "word_vocab too small for the sentence and candidates");
}

TextAttrTrial BuildTextAttrTrial(const TextAttrConfig& config,
                                 std::size_t trial) {
  config.Validate();
  Rng rng(SplitSeed(config.seed, "text_attr", trial));
  const std::size_t k = config.k;
  const auto vocab = config.word_vocab;

  TextAttrTrial t;
  for (std::size_t d = 0; d < config.background_docs; ++d) {
    TokenSeq doc(config.background_doc_tokens);
    for (auto& w : doc) w = static_cast<Token>(rng.UniformInt(vocab));
    t.corpus.documents.push_back(std::move(doc));
  }
  // Candidates and sentence words are distinct draws so the sentence's
  // context does not itself contain a candidate.
  const auto picks = rng.SampleWithoutReplacement(vocab, config.n_candidates + 2 * (k - 1));
  std::vector<Token> words(picks.begin(), picks.end());
  rng.Shuffle(words);
  std::vector<Token> candidates(words.begin(), words.begin() + config.n_candidates);
  TokenSeq pre(words.begin() + config.n_candidates,
               words.begin() + config.n_candidates + (k - 1));
  TokenSeq post(words.begin() + config.n_candidates + (k - 1), words.end());
  t.true_index = rng.UniformInt(config.n_candidates);

  TokenSeq sentence = pre;
  sentence.push_back(candidates[t.true_index]);
  sentence.insert(sentence.end(), post.begin(), post.end());
  t.corpus.documents.push_back(sentence);
  rng.Shuffle(t.corpus.documents);

  t.families = BuildPoisonFamilies(pre, post, candidates, k,
                                   SplitSeed(config.seed, "markers", trial),
                                   &t.corpus);
  for (const auto& f : t.families) {
    for (const auto& s : f.strings) t.corpus.documents.push_back(s);
  }
  t.deduplicated = KgramDedup(t.corpus, k);
  return t;
}

bool CollapseMatchesTruth(const TextAttrTrial& t) {
  for (const auto& f : t.families) {
    const bool present = CorpusContains(t.deduplicated, f.Collapsed());
    if (present != (f.index == t.true_index)) return false;
  }
  return true;
}

AttributeGuess AttackTrial(const TextAttrTrial& t,
                           const memfilter::NGramConfig& lm_config) {
  memfilter::NGramLm lm(lm_config);
  lm.Train(t.deduplicated);
  return InferAttribute(
      [&](std::span<const Token> s) { return lm.NegLogLikelihood(s); },
      t.families);
}

AttackReport RunTextAttr(const TextAttrConfig& config) {
  config.Validate();
  struct Outcome {
    std::size_t truth = 0;
    AttributeGuess guess;
    bool inclusion = false;
  };
  std::vector<Outcome> outcomes(config.trials);
  ParallelFor(config.trials, [&](std::size_t i) {
    const TextAttrTrial t = BuildTextAttrTrial(config, i);
    outcomes[i].truth = t.true_index;
    outcomes[i].inclusion = CollapseMatchesTruth(t);
    outcomes[i].guess = AttackTrial(t, config.lm);
  });

  AttackReport report;
  report.scenario_name = "text_attr";
  report.seed = config.seed;
  std::size_t correct = 0, inclusion = 0, ties = 0;
  Json per_trial = Json::array();
  for (const auto& o : outcomes) {
    const bool ok = o.guess.index == o.truth;
    correct += ok;
    inclusion += o.inclusion;
    ties += o.guess.tie;
    report.scores.push_back({ok ? 1.0 : 0.0, true});
    per_trial.push_back({{"true_index", o.truth},
                         {"guess", o.guess.index},
                         {"tie", o.guess.tie},
                         {"collapse_matches_truth", o.inclusion},
                         {"losses", o.guess.losses}});
  }
  report.query_count = static_cast<std::int64_t>(config.trials * config.n_candidates);
  report.extra["correct"] = correct;
  report.extra["trials"] = config.trials;
  report.extra["collapse_property_holds"] = inclusion;
  report.extra["ties"] = ties;
  report.extra["n_candidates"] = config.n_candidates;
  report.extra["k"] = config.k;
  report.extra["per_trial"] = std::move(per_trial);
  return report;
}

}  // namespace sclab::textdedup
