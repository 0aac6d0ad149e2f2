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

#include "sclab/tokenizer/bpe.h"

#include <algorithm>
#include <limits>
#include <functional>
#include <map>
#include <queue>

#include "sclab/core/error.h"

namespace sclab::tokenizer {
namespace {

std::uint64_t PairKey(TokenId a, TokenId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Merges every non-overlapping occurrence of (a, b), left to right.
void MergeAll(std::vector<TokenId>& s, TokenId a, TokenId b, TokenId ab) {
  std::size_t w = 0;
  for (std::size_t r = 0; r < s.size();) {
    if (r + 1 < s.size() && s[r] == a && s[r + 1] == b) {
      s[w++] = ab;
      r += 2;
    } else {
      s[w++] = s[r++];
    }
  }
  s.resize(w);
}

// Below this length a rescan per merge beats the heap.
constexpr std::size_t kShortWord = 12;

std::vector<TokenId> Bytes(std::string_view word) {
  std::vector<TokenId> s(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    s[i] = static_cast<unsigned char>(word[i]);
  }
  return s;
}

}  // namespace

bool IsWhitespaceByte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

std::vector<std::string_view> SplitWords(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsWhitespaceByte(static_cast<unsigned char>(text[i]))) {
      words.push_back(text.substr(i, 1));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !IsWhitespaceByte(static_cast<unsigned char>(text[j]))) ++j;
    words.push_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

Vocabulary::Vocabulary() {
  tokens_.reserve(256);
  for (int b = 0; b < 256; ++b) {
    tokens_.emplace_back(1, static_cast<char>(b));
    index_.emplace(tokens_.back(), b);
  }
}

std::optional<TokenId> Vocabulary::Find(std::string_view bytes) const {
  auto it = index_.find(std::string(bytes));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Vocabulary::MergeRank(TokenId left, TokenId right) const {
  auto it = rank_.find(PairKey(left, right));
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::AddMerge(TokenId left, TokenId right) {
  const auto n = static_cast<TokenId>(tokens_.size());
  SCLAB_REQUIRE(left >= 0 && left < n && right >= 0 && right < n,
                "AddMerge: unknown token id");
  const std::string merged = tokens_[left] + tokens_[right];
  for (unsigned char c : merged) {
    SCLAB_REQUIRE(!IsWhitespaceByte(c), "AddMerge: whitespace is never merged");
  }
  SCLAB_REQUIRE(!index_.count(merged), "AddMerge: token already exists");
  const int rank = static_cast<int>(merges_.size());
  merges_.emplace_back(left, right);
  rank_.emplace(PairKey(left, right), rank);
  tokens_.push_back(merged);
  index_.emplace(merged, n);
  return n;
}

bool Vocabulary::SatisfiesSplitInvariant() const {
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const auto [a, b] = merges_[r];
    const TokenId id = static_cast<TokenId>(256 + r);
    if (a >= id || b >= id) return false;
    if (tokens_[id] != tokens_[a] + tokens_[b]) return false;
  }
  return true;
}

std::string ToHex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

std::string FromHex(std::string_view hex) {
  SCLAB_REQUIRE(hex.size() % 2 == 0, "FromHex: odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ContractViolation("FromHex: bad digit");
  };
  std::string out(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
  }
  return out;
}

Json Vocabulary::ToJson() const {
  Json toks = Json::array();
  for (const auto& t : tokens_) toks.push_back(ToHex(t));
  Json merges = Json::array();
  for (const auto& [a, b] : merges_) {
    merges.push_back({ToHex(tokens_[a]), ToHex(tokens_[b])});
  }
  return Json{{"tokens", toks}, {"merges", merges}};
}

Vocabulary Vocabulary::FromJson(const Json& j) {
  Vocabulary v;
  for (const auto& m : j.at("merges")) {
    SCLAB_REQUIRE(m.is_array() && m.size() == 2, "vocab JSON: bad merge");
    auto a = v.Find(FromHex(m[0].get<std::string>()));
    auto b = v.Find(FromHex(m[1].get<std::string>()));
    SCLAB_REQUIRE(a && b, "vocab JSON: merge refers to unknown token");
    v.AddMerge(*a, *b);
  }
  if (j.contains("tokens")) {
    SCLAB_REQUIRE(j.at("tokens").size() == v.size(),
                  "vocab JSON: token list disagrees with merges");
    for (std::size_t i = 0; i < v.size(); ++i) {
      SCLAB_REQUIRE(FromHex(j.at("tokens")[i].get<std::string>()) == v.token(i),
                    "vocab JSON: token list disagrees with merges");
    }
  }
  return v;
}

Vocabulary TrainBpe(std::string_view corpus, std::size_t num_merges) {
  SCLAB_REQUIRE(!corpus.empty(), "TrainBpe: empty corpus");
  Vocabulary vocab;
  std::map<std::string_view, std::int64_t> word_counts;
  for (auto w : SplitWords(corpus)) {
    if (!IsWhitespaceByte(static_cast<unsigned char>(w[0]))) ++word_counts[w];
  }
  std::vector<std::vector<TokenId>> words;
  std::vector<std::int64_t> counts;
  for (const auto& [w, c] : word_counts) {
    if (w.size() < 2) continue;
    words.push_back(Bytes(w));
    counts.push_back(c);
  }
  for (std::size_t step = 0; step < num_merges; ++step) {
    std::unordered_map<std::uint64_t, std::int64_t> freq;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& s = words[i];
      for (std::size_t p = 0; p + 1 < s.size(); ++p) {
        freq[PairKey(s[p], s[p + 1])] += counts[i];
      }
    }
    std::int64_t best = 0;
    TokenId ba = -1, bb = -1;
    for (const auto& [key, f] : freq) {
      const auto a = static_cast<TokenId>(key >> 32);
      const auto b = static_cast<TokenId>(key & 0xffffffffu);
      if (f > best ||
          (f == best && std::pair<const std::string&, const std::string&>(
                            vocab.token(a), vocab.token(b)) <
                            std::pair<const std::string&, const std::string&>(
                                vocab.token(ba), vocab.token(bb)))) {
        best = f;
        ba = a;
        bb = b;
      }
    }
    if (best < 2) break;
    const TokenId ab = vocab.AddMerge(ba, bb);
    for (auto& s : words) MergeAll(s, ba, bb, ab);
  }
  return vocab;
}

std::vector<TokenId> TokenizeWord(const Vocabulary& vocab,
                                  std::string_view word) {
  std::vector<TokenId> sym = Bytes(word);
  const std::size_t n = sym.size();
  if (n < 2 || vocab.merges().empty()) return sym;
  if (n <= kShortWord) {
    for (;;) {
      int best = std::numeric_limits<int>::max();
      for (std::size_t p = 0; p + 1 < sym.size(); ++p) {
        if (auto r = vocab.MergeRank(sym[p], sym[p + 1]); r && *r < best) {
          best = *r;
        }
      }
      if (best == std::numeric_limits<int>::max()) return sym;
      const auto [a, b] = vocab.merges()[best];
      MergeAll(sym, a, b, static_cast<TokenId>(256 + best));
    }
  }
  // Doubly linked symbols; a heap of candidate merges keyed by (rank, pos)
  // with stale entries skipped on pop. Popping the lowest (rank, pos) merges
  // the leftmost occurrence of the lowest-rank pair, which reproduces the
  // pass-per-rank encoding because every pair that involves a merged token
  // ranks after the merge that made it.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = i == 0 ? kNone : i - 1;
    next[i] = i + 1 == n ? kNone : i + 1;
  }
  struct Cand {
    int rank;
    std::size_t pos;
    TokenId left, right;
    bool operator>(const Cand& o) const {
      return rank != o.rank ? rank > o.rank : pos > o.pos;
    }
  };
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap;
  auto push = [&](std::size_t i) {
    if (i == kNone || next[i] == kNone) return;
    if (auto r = vocab.MergeRank(sym[i], sym[next[i]])) {
      heap.push({*r, i, sym[i], sym[next[i]]});
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) push(i);
  std::vector<char> alive(n, 1);
  while (!heap.empty()) {
    const Cand c = heap.top();
    heap.pop();
    const std::size_t j = next[c.pos];
    if (!alive[c.pos] || j == kNone || sym[c.pos] != c.left ||
        sym[j] != c.right) {
      continue;
    }
    sym[c.pos] = static_cast<TokenId>(256 + c.rank);
    alive[j] = 0;
    next[c.pos] = next[j];
    if (next[j] != kNone) prev[next[j]] = c.pos;
    push(prev[c.pos]);
    push(c.pos);
  }
  std::vector<TokenId> out;
  for (std::size_t i = 0; i != kNone; i = next[i]) out.push_back(sym[i]);
  return out;
}

std::vector<TokenId> Tokenize(const Vocabulary& vocab, std::string_view text) {
  std::vector<TokenId> out;
  for (auto w : SplitWords(text)) {
    auto t = TokenizeWord(vocab, w);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

std::vector<TokenId> TokenizeByMergeOrder(const Vocabulary& vocab,
                                          std::string_view text) {
  std::vector<TokenId> out;
  for (auto w : SplitWords(text)) {
    std::vector<TokenId> s = Bytes(w);
    for (std::size_t r = 0; r < vocab.merges().size(); ++r) {
      const auto [a, b] = vocab.merges()[r];
      MergeAll(s, a, b, static_cast<TokenId>(256 + r));
    }
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<std::string> TokenStrings(const Vocabulary& vocab,
                                      const std::vector<TokenId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(vocab.token(id));
  return out;
}

}  // namespace sclab::tokenizer
