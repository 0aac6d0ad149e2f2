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

#include "sclab/tokenizer/extract.h"

#include <algorithm>
#include <tuple>
#include <unordered_set>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"

namespace sclab::tokenizer {

std::size_t ProbeRepetitions(const ProbeSetup& setup) {
  const std::size_t n = setup.window;
  const std::size_t fixed_bytes =
      2 * setup.probe.question.size() + setup.probe.answer.size();
  SCLAB_REQUIRE(!setup.probe.question.empty() && !setup.probe.answer.empty(),
                "probe question and answer must be nonempty");
  if (n < fixed_bytes + 3) {
    throw ConfigError({"probe sentence does not fit in the window"});
  }
  const std::size_t r = (n - 1 - fixed_bytes) / 2;
  if (r == 0 || 2 + 3 * r + 1 <= n) {
    throw ConfigError(
        {"probe sentence too long for window " + std::to_string(n) +
         ": a two-token candidate would still fit"});
  }
  return r;
}

std::string CandidatePadding(std::string_view candidate,
                             std::size_t repetitions) {
  std::string s;
  s.reserve((candidate.size() + 1) * repetitions + 1);
  for (std::size_t i = 0; i < repetitions; ++i) {
    s.push_back(' ');
    s.append(candidate);
  }
  s.push_back(' ');
  return s;
}

VocabExtraction ExtractVocabulary(ProbeOracle& oracle, const ProbeSetup& setup,
                                  std::size_t max_token_len) {
  const std::size_t reps = ProbeRepetitions(setup);
  VocabExtraction out;
  out.queries_by_length.assign(max_token_len + 1, 0);
  // by_len[a]: recovered non-whitespace tokens of length a.
  std::vector<std::vector<std::string>> by_len(max_token_len + 1);
  for (int b = 0; b < 256; ++b) {
    if (!IsWhitespaceByte(static_cast<unsigned char>(b))) {
      by_len[1].emplace_back(1, static_cast<char>(b));
    }
  }
  for (std::size_t t = 2; t <= max_token_len; ++t) {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cands;
    for (std::size_t a = 1; a < t; ++a) {
      for (std::size_t i = 0; i < by_len[a].size(); ++i) {
        for (std::size_t j = 0; j < by_len[t - a].size(); ++j) {
          cands.emplace_back(a, i, j);
        }
      }
    }
    std::vector<char> yes(cands.size(), 0);
    ParallelFor(cands.size(), [&](std::size_t c) {
      const auto [a, i, j] = cands[c];
      const std::string s = by_len[a][i] + by_len[t - a][j];
      yes[c] = OracleAnswers(oracle, setup.probe, CandidatePadding(s, reps));
    });
    out.query_count += cands.size();
    out.queries_by_length[t] = cands.size();
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (!yes[c]) continue;
      const auto [a, i, j] = cands[c];
      const std::string& u = by_len[a][i];
      const std::string& v = by_len[t - a][j];
      if (out.vocab.Contains(u + v)) continue;
      out.vocab.AddMerge(*out.vocab.Find(u), *out.vocab.Find(v));
      by_len[t].push_back(u + v);
    }
  }
  return out;
}

std::uint64_t ExpectedExtractionQueries(const std::vector<std::string>& tokens,
                                        std::size_t max_token_len) {
  std::vector<std::uint64_t> counts(max_token_len + 1, 0);
  for (const auto& t : tokens) {
    if (t.empty() || t.size() > max_token_len) continue;
    if (t.size() == 1 && IsWhitespaceByte(static_cast<unsigned char>(t[0]))) {
      continue;
    }
    ++counts[t.size()];
  }
  std::uint64_t q = 0;
  for (std::size_t t = 2; t <= max_token_len; ++t) {
    for (std::size_t a = 1; a < t; ++a) q += counts[a] * counts[t - a];
  }
  return q;
}

std::vector<std::string> TokensUpTo(const Vocabulary& vocab,
                                    std::size_t max_len) {
  std::vector<std::string> out;
  for (const auto& t : vocab.tokens()) {
    if (t.size() <= max_len) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TokenizationExtraction ExtractTokenization(ProbeOracle& oracle,
                                           const ProbeSetup& setup,
                                           std::string_view target) {
  const std::size_t reps = ProbeRepetitions(setup);
  TokenizationExtraction out;
  std::vector<std::string_view> words;
  std::size_t longest = 0;
  for (auto w : SplitWords(target)) {
    if (IsWhitespaceByte(static_cast<unsigned char>(w[0]))) continue;
    words.push_back(w);
    longest = std::max(longest, w.size());
  }
  std::unordered_set<std::string> known;
  for (auto w : words) {
    for (char c : w) known.emplace(1, c);
  }
  Vocabulary guess;
  for (std::size_t t = 2; t <= longest; ++t) {
    std::unordered_set<std::string_view> visited;
    for (auto w : words) {
      for (std::size_t p = 0; p + t <= w.size(); ++p) {
        std::string_view s = w.substr(p, t);
        if (!visited.insert(s).second) continue;
        for (std::size_t a = 1; a < t; ++a) {
          const std::string u(s.substr(0, a));
          const std::string v(s.substr(a));
          if (!known.count(u) || !known.count(v)) continue;
          // The answer depends on s only, so one split is enough.
          ++out.query_count;
          if (OracleAnswers(oracle, setup.probe, CandidatePadding(s, reps))) {
            known.emplace(s);
            out.recovered.emplace_back(s);
            guess.AddMerge(*guess.Find(u), *guess.Find(v));
          }
          break;
        }
      }
    }
  }
  out.segmentation = TokenStrings(guess, Tokenize(guess, target));
  return out;
}

}  // namespace sclab::tokenizer
