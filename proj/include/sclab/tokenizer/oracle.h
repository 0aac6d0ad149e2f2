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

#ifndef SCLAB_TOKENIZER_ORACLE_H_
#define SCLAB_TOKENIZER_ORACLE_H_

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <mutex>
#include <string>
#include <string_view>

#include "sclab/tokenizer/bpe.h"

namespace sclab::tokenizer {

inline constexpr std::size_t kDefaultWindow = 128;

// The probe sentence: the prompt is question + answer + padding + question and
// the model completes it with the answer only if the answered copy is still
// inside its window.
struct ProbeSentence {
  std::string question = "color:";
  std::string answer = " red.";
};

// Text in, yes/no out. Implementations must be safe to call concurrently.
class ProbeOracle {
 public:
  virtual ~ProbeOracle() = default;
  // True when the model answers the final question.
  virtual bool Answers(std::string_view prompt) = 0;
};

// Simulated model with a hidden vocabulary and a window of N tokens: it
// answers iff the prompt starts with the answered question and the whole
// prompt is at most N tokens.
class SimulatedContextOracle : public ProbeOracle {
 public:
  SimulatedContextOracle(Vocabulary hidden, std::size_t window,
                         ProbeSentence probe = {});

  bool Answers(std::string_view prompt) override;

  const Vocabulary& hidden() const { return hidden_; }
  std::size_t window() const { return window_; }
  const ProbeSentence& probe() const { return probe_; }
  // Exact token count of `text`; stops early and returns some value above
  // `limit` once the count passes it.
  std::size_t TokenCount(
      std::string_view text,
      std::size_t limit = std::numeric_limits<std::size_t>::max()) const;

 private:
  Vocabulary hidden_;
  std::size_t window_;
  ProbeSentence probe_;
  std::string answered_;
};

// Counts every call into the wrapped oracle.
class CountingOracle : public ProbeOracle {
 public:
  explicit CountingOracle(ProbeOracle& inner) : inner_(inner) {}
  bool Answers(std::string_view prompt) override;
  std::uint64_t calls() const { return calls_.load(); }

 private:
  ProbeOracle& inner_;
  std::atomic<std::uint64_t> calls_{0};
};

// Remote adapter over a pair of streams: writes the prompt as one hex line and
// reads back a line holding 0 or 1. Calls are serialized.
class StreamOracle : public ProbeOracle {
 public:
  StreamOracle(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  bool Answers(std::string_view prompt) override;

 private:
  std::istream& in_;
  std::ostream& out_;
  std::mutex mu_;
};

// question + answer + padding + question.
std::string ProbePrompt(const ProbeSentence& probe, std::string_view padding);

bool OracleAnswers(ProbeOracle& oracle, const ProbeSentence& probe,
                   std::string_view padding);

// Serves requests from `in` against `oracle` until end of stream; the other
// side of StreamOracle.
void ServeOracle(ProbeOracle& oracle, std::istream& in, std::ostream& out);

}  // namespace sclab::tokenizer

#endif  // SCLAB_TOKENIZER_ORACLE_H_
