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

#include "sclab/memfilter/bloom.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::memfilter {
namespace {

constexpr char kMagic[8] = {'S', 'C', 'B', 'L', 'O', 'O', 'M', '1'};

std::uint64_t Mix(std::span<const Token> key, std::uint64_t seed) {
  std::uint64_t h = SplitMix64(seed ^ key.size());
  for (Token t : key) h = SplitMix64(h ^ static_cast<std::uint32_t>(t));
  return h;
}

template <typename T>
void PutLe(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T GetLe(const std::string& in, std::size_t& pos) {
  SCLAB_REQUIRE(pos + sizeof(T) <= in.size(), "bloom file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  }
  pos += sizeof(T);
  return static_cast<T>(v);
}

}  // namespace

BloomSizing SizeBloom(std::uint64_t n, double fp_rate) {
  SCLAB_REQUIRE(n > 0, "SizeBloom: no keys");
  SCLAB_REQUIRE(fp_rate > 0 && fp_rate < 1, "SizeBloom: fp rate in (0, 1)");
  const double ln2 = std::log(2.0);
  const double m = std::ceil(-static_cast<double>(n) * std::log(fp_rate) /
                             (ln2 * ln2));
  BloomSizing s;
  s.bits = static_cast<std::uint64_t>(m);
  s.hashes = static_cast<std::uint32_t>(
      std::max(1.0, std::round(m / static_cast<double>(n) * ln2)));
  return s;
}

BloomFilter::BloomFilter(std::uint64_t bits, std::uint32_t hashes,
                         std::uint32_t key_length, std::uint64_t seed1,
                         std::uint64_t seed2)
    : bits_(bits),
      hashes_(hashes),
      key_length_(key_length),
      seed1_(seed1),
      seed2_(seed2),
      data_((bits + 7) / 8, 0) {
  SCLAB_REQUIRE(bits > 0 && hashes > 0, "BloomFilter: empty sizing");
}

void BloomFilter::Insert(std::span<const Token> key) {
  SCLAB_REQUIRE(key_length_ == 0 || key.size() == key_length_,
                "bloom key has the wrong length");
  const std::uint64_t h1 = Mix(key, seed1_);
  const std::uint64_t h2 = Mix(key, seed2_) | 1;
  for (std::uint32_t i = 0; i < hashes_; ++i) {
    const std::uint64_t b = (h1 + i * h2) % bits_;
    data_[b >> 3] |= static_cast<std::uint8_t>(1u << (b & 7));
  }
  ++inserted_;
}

bool BloomFilter::Contains(std::span<const Token> key) const {
  SCLAB_REQUIRE(key_length_ == 0 || key.size() == key_length_,
                "bloom key has the wrong length");
  const std::uint64_t h1 = Mix(key, seed1_);
  const std::uint64_t h2 = Mix(key, seed2_) | 1;
  for (std::uint32_t i = 0; i < hashes_; ++i) {
    const std::uint64_t b = (h1 + i * h2) % bits_;
    if ((data_[b >> 3] & (1u << (b & 7))) == 0) return false;
  }
  return true;
}

double BloomFilter::FillRatio() const {
  std::uint64_t set = 0;
  for (auto byte : data_) set += std::popcount(byte);
  return static_cast<double>(set) / static_cast<double>(bits_);
}

std::string BloomFilter::Serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  PutLe(out, key_length_);
  PutLe(out, bits_);
  PutLe(out, hashes_);
  PutLe(out, seed1_);
  PutLe(out, seed2_);
  PutLe(out, inserted_);
  out.append(reinterpret_cast<const char*>(data_.data()), data_.size());
  return out;
}

BloomFilter BloomFilter::Deserialize(const std::string& bytes) {
  SCLAB_REQUIRE(bytes.size() >= sizeof(kMagic) &&
                    std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0,
                "bloom file: bad magic");
  std::size_t pos = sizeof(kMagic);
  const auto key_length = GetLe<std::uint32_t>(bytes, pos);
  const auto bits = GetLe<std::uint64_t>(bytes, pos);
  const auto hashes = GetLe<std::uint32_t>(bytes, pos);
  const auto seed1 = GetLe<std::uint64_t>(bytes, pos);
  const auto seed2 = GetLe<std::uint64_t>(bytes, pos);
  const auto inserted = GetLe<std::uint64_t>(bytes, pos);
  BloomFilter f(bits, hashes, key_length, seed1, seed2);
  SCLAB_REQUIRE(bytes.size() - pos == f.data_.size(), "bloom file: bad size");
  std::memcpy(f.data_.data(), bytes.data() + pos, f.data_.size());
  f.inserted_ = inserted;
  return f;
}

}  // namespace sclab::memfilter
