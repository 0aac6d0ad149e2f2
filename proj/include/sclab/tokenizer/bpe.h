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

#ifndef SCLAB_TOKENIZER_BPE_H_
#define SCLAB_TOKENIZER_BPE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sclab/core/report.h"

namespace sclab::tokenizer {

using TokenId = std::int32_t;

// Whitespace bytes split the input into words. They are tokens of their own
// and never take part in a merge.
bool IsWhitespaceByte(unsigned char c);
inline constexpr int kNumWhitespaceBytes = 6;

// Splits text into alternating runs: each maximal run of non-whitespace bytes
// is one word and every whitespace byte is a word by itself.
std::vector<std::string_view> SplitWords(std::string_view text);

// Byte-level BPE vocabulary. Ids 0..255 are the single bytes; merge r creates
// id 256 + r from the pair merges()[r].
class Vocabulary {
 public:
  Vocabulary();

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::pair<TokenId, TokenId>>& merges() const {
    return merges_;
  }
  std::optional<TokenId> Find(std::string_view bytes) const;
  bool Contains(std::string_view bytes) const { return Find(bytes).has_value(); }
  // Rank of the merge (left, right), if any.
  std::optional<int> MergeRank(TokenId left, TokenId right) const;

  // Appends a merge; throws ContractViolation for unknown ids, whitespace
  // operands or a result that already exists.
  TokenId AddMerge(TokenId left, TokenId right);

  // Every multi-byte token is exactly the concatenation of its merge pair.
  bool SatisfiesSplitInvariant() const;

  // {"tokens": [hex...], "merges": [[hex, hex], ...]}
  Json ToJson() const;
  static Vocabulary FromJson(const Json& j);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::pair<TokenId, TokenId>> merges_;
  std::unordered_map<std::string, TokenId> index_;
  std::unordered_map<std::uint64_t, int> rank_;
};

std::string ToHex(std::string_view bytes);
std::string FromHex(std::string_view hex);

// Standard BPE on words: repeatedly merge the most frequent adjacent pair,
// ties broken by the byte strings of (left, right) in lexicographic order.
// Stops after num_merges merges or when no pair occurs twice.
Vocabulary TrainBpe(std::string_view corpus, std::size_t num_merges);

// Lowest-rank pair first, all its occurrences left to right, until no merge
// applies; words are encoded independently. The concatenation of the output
// equals the input.
std::vector<TokenId> Tokenize(const Vocabulary& vocab, std::string_view text);
std::vector<TokenId> TokenizeWord(const Vocabulary& vocab,
                                  std::string_view word);

// Reference encoder: applies every merge in rank order as a full left-to-right
// pass. Slow; used to cross-check Tokenize.
std::vector<TokenId> TokenizeByMergeOrder(const Vocabulary& vocab,
                                          std::string_view text);

std::vector<std::string> TokenStrings(const Vocabulary& vocab,
                                      const std::vector<TokenId>& ids);

}  // namespace sclab::tokenizer

#endif  // SCLAB_TOKENIZER_BPE_H_
