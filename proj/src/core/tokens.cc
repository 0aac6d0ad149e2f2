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

#include "sclab/core/tokens.h"

#include <algorithm>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab {

std::size_t TokenCorpus::TotalTokens() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.size();
  return n;
}

void TokenCorpus::Validate() const {
  for (std::size_t i = 0; i < documents.size(); ++i) {
    SCLAB_REQUIRE(!documents[i].empty(),
                  "corpus: document " + std::to_string(i) + " is empty");
  }
}

std::size_t TokenSpanHash::operator()(std::span<const Token> s) const {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ s.size();
  for (Token t : s) {
    h = SplitMix64(h ^ static_cast<std::uint32_t>(t));
  }
  return static_cast<std::size_t>(h);
}

Token Lexicon::Intern(std::string_view word) {
  auto it = ids_.find(std::string(word));
  if (it != ids_.end()) return it->second;
  const Token id = static_cast<Token>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

TokenCorpus ParseCorpusText(std::string_view text, Lexicon& lexicon) {
  TokenCorpus corpus;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    TokenSeq doc;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\r') ++j;
      if (j > i) doc.push_back(lexicon.Intern(line.substr(i, j - i)));
      i = j;
    }
    if (!doc.empty()) corpus.documents.push_back(std::move(doc));
    pos = eol + 1;
  }
  return corpus;
}

std::string FormatCorpusText(const TokenCorpus& corpus,
                             const Lexicon& lexicon) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i > 0) out.push_back(' ');
      out += lexicon.Word(doc[i]);
    }
    out.push_back('\n');
  }
  return out;
}

TokenCorpus CorpusFromJson(const Json& j) {
  SCLAB_REQUIRE(j.is_array(), "corpus JSON must be a list of lists");
  TokenCorpus corpus;
  for (const auto& doc : j) {
    SCLAB_REQUIRE(doc.is_array(), "corpus JSON must be a list of lists");
    TokenSeq d;
    for (const auto& t : doc) {
      SCLAB_REQUIRE(t.is_number_integer(), "corpus tokens must be integers");
      d.push_back(t.get<Token>());
    }
    corpus.documents.push_back(std::move(d));
  }
  corpus.Validate();
  return corpus;
}

Json CorpusToJson(const TokenCorpus& corpus) {
  Json j = Json::array();
  for (const auto& doc : corpus.documents) j.push_back(doc);
  return j;
}

bool CorpusContains(const TokenCorpus& corpus, std::span<const Token> needle) {
  if (needle.empty()) return true;
  for (const auto& doc : corpus.documents) {
    if (std::search(doc.begin(), doc.end(), needle.begin(), needle.end()) !=
        doc.end()) {
      return true;
    }
  }
  return false;
}

}  // namespace sclab
