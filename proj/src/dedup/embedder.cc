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

#include "sclab/dedup/embedder.h"

#include <cmath>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab::dedup {

EmbeddingVector Embedder::Embed(std::span<const double> x) const {
  return Normalize(RawEmbed(x));
}

LinearEmbedder::LinearEmbedder(std::size_t d, std::size_t m,
                               std::uint64_t seed) {
  SCLAB_REQUIRE(d >= 1, "LinearEmbedder: d must be positive");
  SCLAB_REQUIRE(d + 1 <= m, "LinearEmbedder: need d <= m - 1");
  Rng rng(SplitSeed(seed, "linear-embedder"));
  projection_.resize(d, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < m; ++j) projection_(i, j) = scale * rng.Normal();
  }
  const Eigen::VectorXd row_mean = projection_.rowwise().mean();
  projection_.colwise() -= row_mean;
  pinv_ = projection_.completeOrthogonalDecomposition().pseudoInverse();
}

LinearEmbedder::LinearEmbedder(Eigen::MatrixXd projection)
    : projection_(std::move(projection)) {
  SCLAB_REQUIRE(projection_.rows() >= 1 && projection_.cols() >= 1,
                "LinearEmbedder: empty projection");
  pinv_ = projection_.completeOrthogonalDecomposition().pseudoInverse();
}

std::vector<double> LinearEmbedder::RawEmbed(std::span<const double> x) const {
  SCLAB_REQUIRE(x.size() == input_dim(), "LinearEmbedder: input dimension");
  Eigen::Map<const Eigen::VectorXd> v(x.data(), x.size());
  Eigen::VectorXd r = projection_ * v;
  return std::vector<double>(r.data(), r.data() + r.size());
}

std::vector<double> LinearEmbedder::VectorJacobianProduct(
    std::span<const double> x, std::span<const double> g) const {
  SCLAB_REQUIRE(x.size() == input_dim(), "LinearEmbedder: input dimension");
  SCLAB_REQUIRE(g.size() == output_dim(), "LinearEmbedder: output dimension");
  Eigen::Map<const Eigen::VectorXd> gv(g.data(), g.size());
  Eigen::VectorXd r = projection_.transpose() * gv;
  return std::vector<double>(r.data(), r.data() + r.size());
}

}  // namespace sclab::dedup
