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

#include "sclab/textdedup/kgram.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::textdedup {
namespace {

using Occurrence = std::pair<std::size_t, std::size_t>;  // (doc, pos)
using WindowIndex =
    std::unordered_map<TokenSeq, std::vector<Occurrence>, TokenSpanHash>;

TokenSeq Window(const TokenSeq& doc, std::size_t pos, std::size_t k) {
  return TokenSeq(doc.begin() + pos, doc.begin() + pos + k);
}

void Forget(WindowIndex& index, const TokenSeq& window, Occurrence occ) {
  auto it = index.find(window);
  if (it == index.end()) return;
  auto& v = it->second;
  v.erase(std::remove(v.begin(), v.end(), occ), v.end());
  if (v.empty()) index.erase(it);
}

}  // namespace

TokenCorpus KgramDedup(const TokenCorpus& corpus, std::size_t k,
                       const KgramDedupOptions& options,
                       KgramDedupStats* stats) {
  SCLAB_REQUIRE(k >= 2, "KgramDedup: k must be >= 2");
  TokenCorpus out = corpus;
  KgramDedupStats local;
  // Every window before the cursor, with where it occurs.
  WindowIndex seen;
  for (std::size_t d = 0; d < out.documents.size(); ++d) {
    TokenSeq& doc = out.documents[d];
    std::size_t i = 0;
    while (i + k <= doc.size()) {
      TokenSeq w = Window(doc, i, k);
      auto it = seen.find(w);
      bool repeat = false;
      if (it != seen.end()) {
        if (!options.cross_document_only) {
          repeat = true;
        } else {
          for (const auto& occ : it->second) repeat |= occ.first != d;
        }
      }
      if (!repeat) {
        seen[std::move(w)].emplace_back(d, i);
        ++i;
        continue;
      }
      // Windows starting in [i-k+1, i) overlap the splice; drop and rescan.
      const std::size_t back = i >= k - 1 ? i - (k - 1) : 0;
      for (std::size_t j = back; j < i; ++j) {
        Forget(seen, Window(doc, j, k), {d, j});
      }
      doc.erase(doc.begin() + i, doc.begin() + i + k);
      ++local.deletions;
      local.tokens_removed += k;
      i = back;
    }
  }
  // Documents emptied by deletion are dropped.
  out.documents.erase(
      std::remove_if(out.documents.begin(), out.documents.end(),
                     [](const TokenSeq& d) { return d.empty(); }),
      out.documents.end());
  if (stats != nullptr) *stats = local;
  return out;
}

std::size_t CountRepeatedKgrams(const TokenCorpus& corpus, std::size_t k,
                                bool cross_document_only) {
  std::unordered_map<TokenSeq, std::vector<std::size_t>, TokenSpanHash> occ;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    for (std::size_t i = 0; i + k <= doc.size(); ++i) {
      occ[Window(doc, i, k)].push_back(d);
    }
  }
  std::size_t repeated = 0;
  for (const auto& [w, docs] : occ) {
    if (docs.size() < 2) continue;
    if (!cross_document_only) {
      ++repeated;
    } else if (std::any_of(docs.begin(), docs.end(),
                           [&](std::size_t x) { return x != docs.front(); })) {
      ++repeated;
    }
  }
  return repeated;
}

TokenSeq PoisonFamily::Collapsed() const {
  TokenSeq s = marker_a;
  s.insert(s.end(), marker_b.begin(), marker_b.end());
  return s;
}

std::vector<PoisonFamily> BuildPoisonFamilies(
    std::span<const Token> pre_tokens, std::span<const Token> post_tokens,
    std::span<const Token> candidates, std::size_t k,
    std::uint64_t marker_seed, const TokenCorpus* corpus,
    const MarkerSpace& space) {
  // With k = 2 one marker would be empty and A+B a single token that every
  // string of every family contains.
  SCLAB_REQUIRE(k >= 3, "BuildPoisonFamilies: k must be >= 3");
  SCLAB_REQUIRE(pre_tokens.size() == k - 1 && post_tokens.size() == k - 1,
                "BuildPoisonFamilies: need k-1 tokens on each side");
  SCLAB_REQUIRE(!candidates.empty(), "BuildPoisonFamilies: no candidates");
  {
    std::unordered_set<Token> distinct(candidates.begin(), candidates.end());
    SCLAB_REQUIRE(distinct.size() == candidates.size(),
                  "BuildPoisonFamilies: candidates must be distinct");
  }
  const std::size_t len_a = std::max<std::size_t>(1, (k - 1) / 2);
  const std::size_t len_b = k - 1 - len_a;
  const std::size_t markers_needed = candidates.size() * (k - 1);
  SCLAB_REQUIRE(static_cast<std::size_t>(space.size) >= 2 * markers_needed,
                "BuildPoisonFamilies: marker space too small");

  std::unordered_set<Token> forbidden(pre_tokens.begin(), pre_tokens.end());
  forbidden.insert(post_tokens.begin(), post_tokens.end());
  forbidden.insert(candidates.begin(), candidates.end());
  if (corpus != nullptr) {
    for (const auto& doc : corpus->documents) {
      forbidden.insert(doc.begin(), doc.end());
    }
  }

  // The sentence as S_1..S_{k-1}, X, S_{k+1}..S_{2k-1}; index k-1 holds X.
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(SplitSeed(marker_seed, "markers", attempt));
    std::unordered_set<Token> used;
    bool collision = false;
    auto draw = [&]() {
      Token t = space.first + static_cast<Token>(rng.UniformInt(space.size));
      // Markers never repeat; a clash with corpus content forces a reseed.
      while (used.count(t) != 0) {
        t = space.first + static_cast<Token>(rng.UniformInt(space.size));
      }
      if (forbidden.count(t) != 0) collision = true;
      used.insert(t);
      return t;
    };
    std::vector<PoisonFamily> families(candidates.size());
    for (std::size_t f = 0; f < candidates.size(); ++f) {
      PoisonFamily& fam = families[f];
      fam.index = f;
      fam.candidate = candidates[f];
      for (std::size_t a = 0; a < len_a; ++a) fam.marker_a.push_back(draw());
      for (std::size_t b = 0; b < len_b; ++b) fam.marker_b.push_back(draw());
      TokenSeq sentence(pre_tokens.begin(), pre_tokens.end());
      sentence.push_back(candidates[f]);
      sentence.insert(sentence.end(), post_tokens.begin(), post_tokens.end());
      for (std::size_t j = 1; j <= k; ++j) {
        TokenSeq s = fam.marker_a;
        s.insert(s.end(), sentence.begin() + (j - 1),
                 sentence.begin() + (j - 1 + k));
        s.insert(s.end(), fam.marker_b.begin(), fam.marker_b.end());
        fam.strings.push_back(std::move(s));
      }
    }
    if (collision) continue;
    TokenCorpus check;
    for (const auto& fam : families) {
      for (const auto& s : fam.strings) check.documents.push_back(s);
    }
    if (CountRepeatedKgrams(check, k) == 0) return families;
  }
}

AttributeGuess InferAttribute(
    const std::function<double(std::span<const Token>)>& loss_oracle,
    std::span<const PoisonFamily> families) {
  SCLAB_REQUIRE(!families.empty(), "InferAttribute: no families");
  AttributeGuess g;
  for (const auto& fam : families) {
    const TokenSeq probe = fam.Collapsed();
    g.losses.push_back(loss_oracle(probe));
  }
  const double best = *std::min_element(g.losses.begin(), g.losses.end());
  g.index = static_cast<std::size_t>(
      std::find(g.losses.begin(), g.losses.end(), best) - g.losses.begin());
  g.tie = std::count(g.losses.begin(), g.losses.end(), best) > 1;
  return g;
}

}  // namespace sclab::textdedup
