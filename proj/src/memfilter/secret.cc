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

#include "sclab/memfilter/secret.h"

#include <algorithm>
#include <map>

#include "sclab/core/error.h"

namespace sclab::memfilter {

double TokenPrior::Frequency(Token t) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == t) return freq[i];
  }
  return 0.0;
}

TokenPrior BuildPrior(std::string_view reference_text,
                      const tokenizer::Vocabulary& vocab) {
  SCLAB_REQUIRE(!reference_text.empty(), "BuildPrior: empty reference text");
  std::map<Token, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (auto w : tokenizer::SplitWords(reference_text)) {
    for (Token t : tokenizer::TokenizeWord(vocab, w)) {
      ++counts[t];
      ++total;
    }
  }
  std::vector<std::pair<Token, std::uint64_t>> sorted(counts.begin(),
                                                      counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  TokenPrior p;
  for (const auto& [t, c] : sorted) {
    p.tokens.push_back(t);
    p.freq.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return p;
}

std::vector<Token> PriorOrder(std::span<const Token> alphabet,
                              const TokenPrior& prior) {
  std::map<Token, double> f;
  for (std::size_t i = 0; i < prior.tokens.size(); ++i) {
    f[prior.tokens[i]] = prior.freq[i];
  }
  std::vector<Token> order(alphabet.begin(), alphabet.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  bool any = false;
  for (Token t : order) any |= f.count(t) != 0;
  SCLAB_REQUIRE(any, "PriorOrder: alphabet and prior share no token");
  std::stable_sort(order.begin(), order.end(), [&](Token a, Token b) {
    auto fa = f.find(a), fb = f.find(b);
    const double x = fa == f.end() ? 0.0 : fa->second;
    const double y = fb == f.end() ? 0.0 : fb->second;
    return x > y;
  });
  return order;
}

SecretExtraction ExtractSecret(const FilteredLm& system,
                               std::span<const Token> known_prefix,
                               std::span<const Token> alphabet,
                               const TokenPrior& prior, Token terminator,
                               const SecretSearchOptions& options) {
  const std::size_t k = system.filter().k();
  SCLAB_REQUIRE(known_prefix.size() >= k - 1,
                "ExtractSecret: known prefix shorter than k-1 tokens");
  std::vector<Token> cands(alphabet.begin(), alphabet.end());
  if (std::find(cands.begin(), cands.end(), terminator) == cands.end()) {
    cands.push_back(terminator);
  }
  const std::vector<Token> order = PriorOrder(cands, prior);
  const auto& vocab = system.lm().vocabulary();
  for (Token t : order) {
    SCLAB_REQUIRE(std::binary_search(vocab.begin(), vocab.end(), t),
                  "ExtractSecret: alphabet token outside the model vocabulary");
  }

  SecretExtraction out;
  TokenSeq path(known_prefix.begin(), known_prefix.end());
  // cursor[d]: next candidate index to try at depth d.
  std::vector<std::size_t> cursor = {0};
  for (;;) {
    if (cursor.back() == order.size()) {
      cursor.pop_back();
      if (cursor.empty()) break;
      path.pop_back();
      ++out.backtracks;
      ++cursor.back();
      continue;
    }
    if (out.queries >= options.max_queries) {
      out.budget_exhausted = true;
      break;
    }
    const Token c = order[cursor.back()];
    std::span<const Token> ctx(path.end() - (k - 1), path.end());
    const Token cand[1] = {c};
    ++out.queries;
    const bool member =
        MiPermanent(system, ctx, cand, options.repetitions).verdict ==
        MiVerdict::kMember;
    if (!member) {
      ++cursor.back();
      continue;
    }
    path.push_back(c);
    if (c == terminator) {
      out.complete = true;
      break;
    }
    if (path.size() - known_prefix.size() >= options.max_length) {
      path.pop_back();
      ++out.backtracks;
      ++cursor.back();
      continue;
    }
    cursor.push_back(0);
  }
  out.tokens.assign(path.begin() + known_prefix.size(), path.end());
  return out;
}

std::string RandomBase64(Rng& rng, std::size_t chars, std::size_t line_length) {
  std::string s;
  s.reserve(chars + (line_length ? chars / line_length + 1 : 0));
  for (std::size_t i = 0; i < chars; ++i) {
    s.push_back(kBase64Alphabet[rng.UniformInt(kBase64Alphabet.size())]);
    if (line_length > 0 && (i + 1) % line_length == 0) s.push_back('\n');
  }
  return s;
}

std::string PseudoEnglish(Rng& rng, std::size_t bytes) {
  static constexpr std::string_view kSyllables[] = {
      "th", "e",  "in", "er", "an", "re", "on", "at", "en", "nd", "ti",
      "es", "or", "te", "of", "ed", "is", "it", "al", "ar", "st", "to",
      "nt", "ng", "se", "ha", "as", "ou", "io", "le", "ve", "co", "me",
      "de", "hi", "ri", "ro", "ic", "ne", "ea", "ra", "ce", "ly", "y"};
  std::string s;
  while (s.size() < bytes) {
    const std::uint64_t kind = rng.UniformInt(40);
    if (kind == 0) {
      s += std::to_string(rng.UniformInt(2100));
    } else {
      std::string w;
      const std::size_t n = 1 + rng.UniformInt(3);
      for (std::size_t i = 0; i < n; ++i) {
        w += kSyllables[rng.UniformInt(std::size(kSyllables))];
      }
      if (kind <= 4) w[0] = static_cast<char>(w[0] - 'a' + 'A');
      s += w;
    }
    const std::uint64_t sep = rng.UniformInt(12);
    if (sep == 0) {
      s += ". ";
    } else if (sep == 1) {
      s += ", ";
    } else if (sep == 2 && rng.UniformInt(4) == 0) {
      s += ".\n";
    } else {
      s += ' ';
    }
  }
  return s;
}

}  // namespace sclab::memfilter
