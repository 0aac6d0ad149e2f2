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

#include "sclab/dedup/dedup.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"

namespace sclab::dedup {

std::string_view DedupModeName(DedupMode m) {
  return m == DedupMode::kExact ? "exact" : "approximate";
}

std::string_view DeletionName(Deletion d) {
  return d == Deletion::kDeleteAll ? "delete_all" : "delete_all_but_one";
}

DedupMode ParseDedupMode(std::string_view s) {
  if (s == "exact") return DedupMode::kExact;
  if (s == "approximate") return DedupMode::kApproximate;
  throw ContractViolation("unknown dedup mode: " + std::string(s));
}

Deletion ParseDeletion(std::string_view s) {
  if (s == "delete_all") return Deletion::kDeleteAll;
  if (s == "delete_all_but_one") return Deletion::kDeleteAllButOne;
  throw ContractViolation("unknown deletion policy: " + std::string(s));
}

void DedupPolicy::Validate() const {
  if (mode == DedupMode::kApproximate) {
    SCLAB_REQUIRE(alpha.has_value(), "approximate dedup needs alpha");
    SCLAB_REQUIRE(*alpha > 0.0 && *alpha <= 1.0, "alpha must be in (0, 1]");
  } else {
    SCLAB_REQUIRE(!alpha.has_value(), "exact dedup takes no alpha");
  }
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<std::size_t> DuplicateGraph::Degrees() const {
  std::vector<std::size_t> deg(ids.size(), 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

std::vector<std::size_t> DuplicateGraph::Components() const {
  UnionFind uf(ids.size());
  for (const auto& [i, j] : edges) uf.Union(i, j);
  std::map<std::size_t, std::size_t> label;
  std::vector<std::size_t> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = label.emplace(uf.Find(i), label.size());
    out[i] = it->second;
  }
  return out;
}

std::size_t DuplicateGraph::NumComponents() const {
  auto c = Components();
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

DuplicateGraph FindDuplicates(const Dataset& data, const DedupPolicy& policy,
                              const Embedder* embedder) {
  SCLAB_REQUIRE(!data.empty(), "FindDuplicates: empty dataset");
  policy.Validate();
  const std::size_t n = data.size();
  DuplicateGraph g;
  g.ids.reserve(n);
  for (const auto& ex : data.examples) g.ids.push_back(ex.id);

  if (policy.mode == DedupMode::kExact) {
    // Group identical feature vectors; every group becomes a clique.
    std::map<std::vector<double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
      groups[data.examples[i].features].push_back(i);
    }
    for (const auto& [key, members] : groups) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          g.edges.emplace_back(members[a], members[b]);
        }
      }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
  }

  SCLAB_REQUIRE(embedder != nullptr, "approximate dedup needs an embedder");
  std::vector<EmbeddingVector> emb(n);
  ParallelFor(n, [&](std::size_t i) {
    emb[i] = embedder->Embed(data.examples[i].features);
  });
  const double threshold = *policy.alpha - kSimilaritySlack;
  std::vector<std::vector<std::size_t>> row_edges(n);
  ParallelFor(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (Dot(emb[i], emb[j]) >= threshold) row_edges[i].push_back(j);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : row_edges[i]) g.edges.emplace_back(i, j);
  }
  return g;
}

Dataset Deduplicate(const Dataset& data, const DuplicateGraph& graph,
                    Deletion deletion, std::uint64_t seed) {
  SCLAB_REQUIRE(graph.ids.size() == data.size(),
                "Deduplicate: graph does not match dataset");
  for (std::size_t i = 0; i < data.size(); ++i) {
    SCLAB_REQUIRE(graph.ids[i] == data.examples[i].id,
                  "Deduplicate: graph does not match dataset");
  }
  std::vector<bool> keep(data.size(), true);
  if (deletion == Deletion::kDeleteAll) {
    const auto deg = graph.Degrees();
    for (std::size_t i = 0; i < data.size(); ++i) keep[i] = deg[i] == 0;
  } else {
    const auto comp = graph.Components();
    const std::size_t nc =
        comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<std::vector<std::size_t>> members(nc);
    for (std::size_t i = 0; i < comp.size(); ++i) members[comp[i]].push_back(i);
    Rng rng(SplitSeed(seed, "dedup-survivor"));
    std::fill(keep.begin(), keep.end(), false);
    for (const auto& mem : members) {
      if (mem.size() == 1) {
        keep[mem[0]] = true;
      } else {
        keep[mem[rng.UniformInt(mem.size())]] = true;
      }
    }
  }
  Dataset out;
  out.provenance = Provenance::kDeduplicated;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (keep[i]) out.examples.push_back(data.examples[i]);
  }
  return out;
}

Dataset ApplyPolicy(const Dataset& data, const DedupPolicy& policy,
                    const Embedder* embedder, std::uint64_t seed) {
  return Deduplicate(data, FindDuplicates(data, policy, embedder),
                     policy.deletion, seed);
}

}  // namespace sclab::dedup
