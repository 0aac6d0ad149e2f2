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

#include "sclab/queryfilter/filter.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <string>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::queryfilter {
namespace {

constexpr char kMagic[8] = {'S', 'C', 'Q', 'H', 'I', 'S', 'T', '1'};

template <typename T>
void PutLe(std::string& out, T v) {
  std::uint64_t u = 0;
  std::memcpy(&u, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  }
}

template <typename T>
T GetLe(const std::string& in, std::size_t& pos) {
  SCLAB_REQUIRE(pos + sizeof(T) <= in.size(), "history log truncated");
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  }
  pos += sizeof(T);
  T v;
  std::memcpy(&v, &u, sizeof(T));
  return v;
}

std::size_t SharedCount(const std::vector<std::uint64_t>& a,
                        const std::vector<std::uint64_t>& b) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

}  // namespace

void FingerprintParams::Validate() const {
  SCLAB_REQUIRE(levels >= 2, "fingerprint levels must be >= 2");
  SCLAB_REQUIRE(window >= 1, "fingerprint window must be >= 1");
}

QueryFingerprint Fingerprint(std::span<const double> x,
                             const FingerprintParams& params) {
  params.Validate();
  SCLAB_REQUIRE(x.size() >= params.window,
                "fingerprint: vector shorter than one window");
  std::vector<std::uint32_t> q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::clamp(x[i], 0.0, 1.0);
    q[i] = static_cast<std::uint32_t>(
        std::min<double>(params.levels - 1, std::floor(v * params.levels)));
  }
  QueryFingerprint fp;
  for (std::size_t s = 0; s + params.window <= q.size(); ++s) {
    std::uint64_t h = SplitMix64(params.salt ^ params.window);
    for (std::size_t j = s; j < s + params.window; ++j) h = SplitMix64(h ^ q[j]);
    fp.hashes.push_back(h);
  }
  std::sort(fp.hashes.begin(), fp.hashes.end());
  fp.hashes.erase(std::unique(fp.hashes.begin(), fp.hashes.end()),
                  fp.hashes.end());
  return fp;
}

double FingerprintSimilarity(const QueryFingerprint& a,
                             const QueryFingerprint& b) {
  const std::size_t denom = std::max(a.hashes.size(), b.hashes.size());
  if (denom == 0) return 0.0;
  return static_cast<double>(SharedCount(a.hashes, b.hashes)) /
         static_cast<double>(denom);
}

GlobalHistory::GlobalHistory(FingerprintParams params, double threshold,
                             bool store_rejected)
    : params_(params), threshold_(threshold), store_rejected_(store_rejected) {
  params_.Validate();
  SCLAB_REQUIRE(threshold > 0 && threshold <= 1,
                "history threshold must be in (0, 1]");
}

GlobalHistory::GlobalHistory(GlobalHistory&& other) noexcept
    : params_(other.params_),
      threshold_(other.threshold_),
      store_rejected_(other.store_rejected_),
      entries_(std::move(other.entries_)),
      index_(std::move(other.index_)) {}

double GlobalHistory::MaxSimilarityLocked(const QueryFingerprint& fp) const {
  // Count shared hashes per stored entry through the index.
  std::unordered_map<std::uint32_t, std::size_t> shared;
  for (std::uint64_t h : fp.hashes) {
    auto it = index_.find(h);
    if (it == index_.end()) continue;
    for (std::uint32_t e : it->second) ++shared[e];
  }
  double best = 0.0;
  for (const auto& [e, n] : shared) {
    const std::size_t denom =
        std::max(fp.hashes.size(), entries_[e].hashes.size());
    best = std::max(best, static_cast<double>(n) / static_cast<double>(denom));
  }
  return best;
}

double GlobalHistory::MaxSimilarity(const QueryFingerprint& fp) const {
  std::shared_lock lock(mu_);
  return MaxSimilarityLocked(fp);
}

void GlobalHistory::AppendLocked(QueryFingerprint fp) {
  const auto e = static_cast<std::uint32_t>(entries_.size());
  for (std::uint64_t h : fp.hashes) index_[h].push_back(e);
  entries_.push_back(std::move(fp));
}

Decision GlobalHistory::Submit(std::span<const double> x) {
  QueryFingerprint fp = Fingerprint(x, params_);
  std::unique_lock lock(mu_);
  const bool reject = MaxSimilarityLocked(fp) >= threshold_;
  if (!reject || store_rejected_) AppendLocked(std::move(fp));
  return reject ? Decision::kReject : Decision::kAccept;
}

std::size_t GlobalHistory::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

void GlobalHistory::WriteLog(std::ostream& out) const {
  std::shared_lock lock(mu_);
  std::size_t width = 1;
  for (const auto& e : entries_) width = std::max(width, e.hashes.size() + 1);
  std::string buf(kMagic, sizeof(kMagic));
  PutLe(buf, static_cast<std::uint32_t>(params_.levels));
  PutLe(buf, static_cast<std::uint64_t>(params_.window));
  PutLe(buf, params_.salt);
  PutLe(buf, threshold_);
  PutLe(buf, static_cast<std::uint8_t>(store_rejected_));
  PutLe(buf, static_cast<std::uint32_t>(width));
  PutLe(buf, static_cast<std::uint64_t>(entries_.size()));
  for (const auto& e : entries_) {
    PutLe(buf, static_cast<std::uint64_t>(e.hashes.size()));
    for (std::uint64_t h : e.hashes) PutLe(buf, h);
    for (std::size_t i = e.hashes.size() + 1; i < width; ++i) {
      PutLe(buf, std::uint64_t{0});
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

GlobalHistory GlobalHistory::ReadLog(std::istream& in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  SCLAB_REQUIRE(bytes.size() >= sizeof(kMagic) &&
                    std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0,
                "not a history log");
  std::size_t pos = sizeof(kMagic);
  FingerprintParams p;
  p.levels = static_cast<int>(GetLe<std::uint32_t>(bytes, pos));
  p.window = GetLe<std::uint64_t>(bytes, pos);
  p.salt = GetLe<std::uint64_t>(bytes, pos);
  const double threshold = GetLe<double>(bytes, pos);
  const bool store_rejected = GetLe<std::uint8_t>(bytes, pos) != 0;
  const auto width = GetLe<std::uint32_t>(bytes, pos);
  const auto records = GetLe<std::uint64_t>(bytes, pos);
  SCLAB_REQUIRE(width >= 1, "history log: bad record width");
  GlobalHistory h(p, threshold, store_rejected);
  for (std::uint64_t r = 0; r < records; ++r) {
    const auto n = GetLe<std::uint64_t>(bytes, pos);
    SCLAB_REQUIRE(n + 1 <= width, "history log: record overflows its width");
    QueryFingerprint fp;
    for (std::size_t i = 1; i < width; ++i) {
      const auto v = GetLe<std::uint64_t>(bytes, pos);
      if (i <= n) fp.hashes.push_back(v);
    }
    SCLAB_REQUIRE(std::is_sorted(fp.hashes.begin(), fp.hashes.end()),
                  "history log: unsorted record");
    h.AppendLocked(std::move(fp));
  }
  SCLAB_REQUIRE(pos == bytes.size(), "history log: trailing bytes");
  return h;
}

bool ProbeQueryMembership(GlobalHistory& system, std::span<const double> x) {
  return system.Submit(x) == Decision::kReject;
}

}  // namespace sclab::queryfilter
