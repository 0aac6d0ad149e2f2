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

#ifndef SCLAB_MEMFILTER_BLOOM_H_
#define SCLAB_MEMFILTER_BLOOM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sclab/core/tokens.h"

namespace sclab::memfilter {

// m = ceil(-n ln p / (ln 2)^2) bits and h = round(m / n * ln 2) >= 1 hashes.
struct BloomSizing {
  std::uint64_t bits = 0;
  std::uint32_t hashes = 0;
};
BloomSizing SizeBloom(std::uint64_t n, double fp_rate);

inline constexpr std::uint64_t kBloomSeed1 = 0x5bd1e995ULL;
inline constexpr std::uint64_t kBloomSeed2 = 0x27d4eb2fULL;

// Bloom filter over token sequences. Probe i of a key is
// (h1 + i * h2) mod m, with h1 and h2 two seeded mixes of the tokens and h2
// forced odd. key_length 0 accepts keys of any length.
class BloomFilter {
 public:
  BloomFilter(std::uint64_t bits, std::uint32_t hashes,
              std::uint32_t key_length = 0, std::uint64_t seed1 = kBloomSeed1,
              std::uint64_t seed2 = kBloomSeed2);

  void Insert(std::span<const Token> key);
  bool Contains(std::span<const Token> key) const;

  std::uint64_t bits() const { return bits_; }
  std::uint32_t hashes() const { return hashes_; }
  std::uint64_t inserted() const { return inserted_; }
  std::uint32_t key_length() const { return key_length_; }
  // Fraction of set bits.
  double FillRatio() const;

  // Little-endian file: "SCBLOOM1", u32 k, u64 bits, u32 hashes, u64 seed1,
  // u64 seed2, u64 inserted, then ceil(bits / 8) bytes with bit i at byte
  // i / 8, position i % 8.
  std::string Serialize() const;
  static BloomFilter Deserialize(const std::string& bytes);

  bool operator==(const BloomFilter&) const = default;

 private:
  std::uint64_t bits_;
  std::uint32_t hashes_;
  std::uint32_t key_length_;
  std::uint64_t seed1_;
  std::uint64_t seed2_;
  std::uint64_t inserted_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace sclab::memfilter

#endif  // SCLAB_MEMFILTER_BLOOM_H_
