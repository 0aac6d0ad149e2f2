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

#ifndef SCLAB_QUERYFILTER_FILTER_H_
#define SCLAB_QUERYFILTER_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace sclab::queryfilter {

struct FingerprintParams {
  // Quantization levels per feature.
  int levels = 16;
  // Window length in features.
  std::size_t window = 8;
  std::uint64_t salt = 0;

  void Validate() const;
};

// Sorted, distinct hashes of every length-`window` run of the quantized
// vector. Level of x is min(levels - 1, floor(x * levels)) after clamping
// to [0, 1].
struct QueryFingerprint {
  std::vector<std::uint64_t> hashes;
};

// Throws ContractViolation when levels < 2 or the vector is shorter than a
// window.
QueryFingerprint Fingerprint(std::span<const double> x,
                             const FingerprintParams& params);

// Shared hashes over the larger hash count; 0 when both are empty.
double FingerprintSimilarity(const QueryFingerprint& a,
                             const QueryFingerprint& b);

enum class Decision { kAccept, kReject };

// Append-only store of fingerprints with an inverted index. Lookups take a
// shared lock; Submit holds the exclusive lock across match and append so a
// query cannot race its own insertion.
class GlobalHistory {
 public:
  // Throws ContractViolation unless 0 < threshold <= 1.
  GlobalHistory(FingerprintParams params, double threshold = 0.5,
                bool store_rejected = false);
  // Moves take the other's contents; the mutex is fresh.
  GlobalHistory(GlobalHistory&& other) noexcept;

  // Largest similarity against any stored fingerprint (0 when empty).
  double MaxSimilarity(const QueryFingerprint& fp) const;

  // Reject iff MaxSimilarity >= threshold. Accepted queries are stored;
  // rejected ones only when store_rejected is set.
  Decision Submit(std::span<const double> x);

  std::size_t size() const;
  const FingerprintParams& params() const { return params_; }
  double threshold() const { return threshold_; }
  bool store_rejected() const { return store_rejected_; }

  // Binary log: "SCQHIST1", u32 levels, u64 window, u64 salt, f64 threshold,
  // u8 store_rejected, u32 record_width, u64 records, then records of
  // record_width u64 slots each: the hash count followed by the hashes, zero
  // padded. Little-endian. record_width is one more than the largest hash
  // count. Records are in insertion order. ReadLog throws ContractViolation on
  // a malformed log.
  void WriteLog(std::ostream& out) const;
  static GlobalHistory ReadLog(std::istream& in);

 private:
  double MaxSimilarityLocked(const QueryFingerprint& fp) const;
  void AppendLocked(QueryFingerprint fp);

  FingerprintParams params_;
  double threshold_;
  bool store_rejected_;
  mutable std::shared_mutex mu_;
  std::vector<QueryFingerprint> entries_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

// The replay probe: resubmits x and reads a rejection as "someone queried x
// before". Note that an accepted probe is itself stored.
bool ProbeQueryMembership(GlobalHistory& system, std::span<const double> x);

}  // namespace sclab::queryfilter

#endif  // SCLAB_QUERYFILTER_FILTER_H_
