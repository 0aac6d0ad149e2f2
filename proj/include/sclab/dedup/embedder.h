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

#ifndef SCLAB_DEDUP_EMBEDDER_H_
#define SCLAB_DEDUP_EMBEDDER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sclab/core/embedding.h"

namespace sclab::dedup {

// A differentiable feature map h. Similarity decisions use the normalized
// output.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;

  // Unnormalized embedding.
  virtual std::vector<double> RawEmbed(std::span<const double> x) const = 0;

  // Gradient with respect to x of dot(g, RawEmbed(x)).
  virtual std::vector<double> VectorJacobianProduct(
      std::span<const double> x, std::span<const double> g) const = 0;

  // Linear embedders expose their matrix so inversion can start from a
  // closed-form preimage; nullptr for anything else.
  virtual const Eigen::MatrixXd* LinearMap() const { return nullptr; }
  virtual const Eigen::MatrixXd* LinearMapPseudoInverse() const {
    return nullptr;
  }

  // normalize(RawEmbed(x)). Throws NumericalError when RawEmbed(x) is zero.
  EmbeddingVector Embed(std::span<const double> x) const;
};

// h(x) = normalize(P x) with a seeded Gaussian d x m matrix P.
//
// The seeded constructor makes every row of P sum to zero, so h ignores the
// component of x along the all-ones direction. Two consequences: a constant
// shift of x never changes its embedding, which lets preimages be slid back
// into the unit box, and d must be at most m - 1 for P to keep full row rank.
class LinearEmbedder : public Embedder {
 public:
  LinearEmbedder(std::size_t d, std::size_t m, std::uint64_t seed);
  // Arbitrary matrix, used as given (no zero-sum adjustment).
  explicit LinearEmbedder(Eigen::MatrixXd projection);

  std::size_t input_dim() const override { return projection_.cols(); }
  std::size_t output_dim() const override { return projection_.rows(); }
  std::vector<double> RawEmbed(std::span<const double> x) const override;
  std::vector<double> VectorJacobianProduct(
      std::span<const double> x, std::span<const double> g) const override;
  const Eigen::MatrixXd* LinearMap() const override { return &projection_; }
  const Eigen::MatrixXd* LinearMapPseudoInverse() const override {
    return &pinv_;
  }

 private:
  Eigen::MatrixXd projection_;
  Eigen::MatrixXd pinv_;
};

}  // namespace sclab::dedup

#endif  // SCLAB_DEDUP_EMBEDDER_H_
