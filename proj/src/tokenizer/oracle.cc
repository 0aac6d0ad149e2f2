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

#include "sclab/tokenizer/oracle.h"

#include <istream>
#include <ostream>

#include "sclab/core/error.h"

namespace sclab::tokenizer {

SimulatedContextOracle::SimulatedContextOracle(Vocabulary hidden,
                                               std::size_t window,
                                               ProbeSentence probe)
    : hidden_(std::move(hidden)),
      window_(window),
      probe_(std::move(probe)),
      answered_(probe_.question + probe_.answer) {
  SCLAB_REQUIRE(window_ > 0, "oracle window must be positive");
}

std::size_t SimulatedContextOracle::TokenCount(std::string_view text,
                                               std::size_t limit) const {
  std::size_t n = 0;
  // Padding repeats one word many times, so remember the last one.
  std::string_view last_word;
  std::size_t last_count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsWhitespaceByte(static_cast<unsigned char>(text[i]))) {
      ++n;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() &&
           !IsWhitespaceByte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    const std::string_view w = text.substr(i, j - i);
    if (w.size() == 1) {
      ++n;
    } else if (w == last_word) {
      n += last_count;
    } else {
      last_word = w;
      last_count = TokenizeWord(hidden_, w).size();
      n += last_count;
    }
    if (n > limit) return n;
    i = j;
  }
  return n;
}

bool SimulatedContextOracle::Answers(std::string_view prompt) {
  if (prompt.substr(0, answered_.size()) != answered_) return false;
  return TokenCount(prompt, window_) <= window_;
}

bool CountingOracle::Answers(std::string_view prompt) {
  calls_.fetch_add(1);
  return inner_.Answers(prompt);
}

bool StreamOracle::Answers(std::string_view prompt) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << ToHex(prompt) << '\n' << std::flush;
  std::string line;
  if (!std::getline(in_, line)) {
    throw ContractViolation("StreamOracle: no response");
  }
  if (line == "1") return true;
  if (line == "0") return false;
  throw ContractViolation("StreamOracle: bad response '" + line + "'");
}

std::string ProbePrompt(const ProbeSentence& probe, std::string_view padding) {
  std::string s;
  s.reserve(2 * probe.question.size() + probe.answer.size() + padding.size());
  s += probe.question;
  s += probe.answer;
  s += padding;
  s += probe.question;
  return s;
}

bool OracleAnswers(ProbeOracle& oracle, const ProbeSentence& probe,
                   std::string_view padding) {
  return oracle.Answers(ProbePrompt(probe, padding));
}

void ServeOracle(ProbeOracle& oracle, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << (oracle.Answers(FromHex(line)) ? '1' : '0') << '\n' << std::flush;
  }
}

}  // namespace sclab::tokenizer
