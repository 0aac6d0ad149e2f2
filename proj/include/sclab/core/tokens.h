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

#ifndef SCLAB_CORE_TOKENS_H_
#define SCLAB_CORE_TOKENS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sclab/core/report.h"

namespace sclab {

using Token = std::int32_t;
using TokenSeq = std::vector<Token>;

struct TokenCorpus {
  std::vector<TokenSeq> documents;

  std::size_t TotalTokens() const;
  // Throws ContractViolation on an empty document.
  void Validate() const;
};

// Hash for token windows used as map keys.
struct TokenSpanHash {
  std::size_t operator()(std::span<const Token> s) const;
  std::size_t operator()(const TokenSeq& s) const {
    return (*this)(std::span<const Token>(s));
  }
};

// Bidirectional map between token strings and dense ids, for the text corpus
// format.
class Lexicon {
 public:
  Token Intern(std::string_view word);
  const std::string& Word(Token id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, Token> ids_;
  std::vector<std::string> words_;
};

// One document per non-empty line, tokens separated by spaces.
TokenCorpus ParseCorpusText(std::string_view text, Lexicon& lexicon);
std::string FormatCorpusText(const TokenCorpus& corpus, const Lexicon& lexicon);

// A JSON list of lists of token ids.
TokenCorpus CorpusFromJson(const Json& j);
Json CorpusToJson(const TokenCorpus& corpus);

// True iff `needle` occurs contiguously in some document.
bool CorpusContains(const TokenCorpus& corpus, std::span<const Token> needle);

}  // namespace sclab

#endif  // SCLAB_CORE_TOKENS_H_
