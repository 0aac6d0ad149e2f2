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

#ifndef SCLAB_CORE_ERROR_H_
#define SCLAB_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sclab {

// A precondition of an operation was not met by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request exceeds what a construction can produce (e.g. more spokes than
// the embedding dimension allows).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Numerical failure that survived regularization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario configuration rejected. Carries every offending field so that a
// single run reports all problems at once.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(Join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string Join(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration";
    for (const auto& p : problems) {
      out += "\n  ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

#define SCLAB_REQUIRE(cond, msg)                                 \
  do {                                                           \
    if (!(cond)) throw ::sclab::ContractViolation(std::string(msg)); \
  } while (0)

}  // namespace sclab

#endif  // SCLAB_CORE_ERROR_H_
