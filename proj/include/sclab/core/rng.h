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

#ifndef SCLAB_CORE_RNG_H_
#define SCLAB_CORE_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sclab {

// Derives a child seed from a parent seed and a label. Every randomized
// component gets its own child seed so that adding a new consumer of
// randomness never perturbs existing streams.
//
//   child = splitmix64(parent ^ fnv1a64(label))
std::uint64_t SplitSeed(std::uint64_t seed, std::string_view label);
std::uint64_t SplitSeed(std::uint64_t seed, std::string_view label,
                        std::uint64_t index);

std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t SplitMix64(std::uint64_t x);

// Seeded random source. Distributions are implemented here rather than
// taken from <random> so that streams are bit-identical across standard
// library implementations; only the mt19937_64 engine (which the standard
// fully specifies) is borrowed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). Unbiased.
  std::uint64_t UniformInt(std::uint64_t n);

  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  // Marsaglia-Tsang. shape > 0, unit scale.
  double Gamma(double shape);

  std::vector<double> Dirichlet(std::span<const double> alpha);

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), in increasing order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace sclab

#endif  // SCLAB_CORE_RNG_H_
