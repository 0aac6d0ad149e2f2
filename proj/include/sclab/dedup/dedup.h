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

#ifndef SCLAB_DEDUP_DEDUP_H_
#define SCLAB_DEDUP_DEDUP_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sclab/core/dataset.h"
#include "sclab/core/embedding.h"
#include "sclab/dedup/embedder.h"

namespace sclab::dedup {

enum class DedupMode { kExact, kApproximate };
enum class Deletion { kDeleteAll, kDeleteAllButOne };

std::string_view DedupModeName(DedupMode m);
std::string_view DeletionName(Deletion d);
DedupMode ParseDedupMode(std::string_view s);
Deletion ParseDeletion(std::string_view s);

inline constexpr double kDefaultAlpha = 0.9;

// Slack applied to the similarity test so that pairs constructed to sit at
// exactly alpha are not lost to rounding.
inline constexpr double kSimilaritySlack = 1e-12;

struct DedupPolicy {
  DedupMode mode = DedupMode::kExact;
  Deletion deletion = Deletion::kDeleteAll;
  // Present iff mode is approximate.
  std::optional<double> alpha;

  // Throws ContractViolation when alpha presence or range is wrong.
  void Validate() const;

  static DedupPolicy Exact(Deletion d) { return {DedupMode::kExact, d, {}}; }
  static DedupPolicy Approximate(Deletion d, double alpha) {
    return {DedupMode::kApproximate, d, alpha};
  }
};

// Edges join positions in the dataset (not ids); ids are kept for reporting.
struct DuplicateGraph {
  std::vector<ExampleId> ids;
  // (i, j) with i < j, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::size_t> Degrees() const;
  // Component label per node, labels numbered by first appearance.
  std::vector<std::size_t> Components() const;
  std::size_t NumComponents() const;
};

// Exact mode compares feature vectors bit for bit; approximate mode links
// pairs whose embedding cosine is at least alpha. Labels are ignored. The
// embedder may be null in exact mode.
DuplicateGraph FindDuplicates(const Dataset& data, const DedupPolicy& policy,
                              const Embedder* embedder);

// Delete-all drops every node with an edge. Delete-all-but-one keeps one
// uniformly chosen member of every component. Order of survivors follows the
// input order.
Dataset Deduplicate(const Dataset& data, const DuplicateGraph& graph,
                    Deletion deletion, std::uint64_t seed);

// FindDuplicates followed by Deduplicate.
Dataset ApplyPolicy(const Dataset& data, const DedupPolicy& policy,
                    const Embedder* embedder, std::uint64_t seed);

}  // namespace sclab::dedup

#endif  // SCLAB_DEDUP_DEDUP_H_
