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

#include "sclab/dedup/poison.h"

#include <algorithm>
#include <cmath>

#include "sclab/core/error.h"

namespace sclab::dedup {

std::vector<EmbeddingVector> HubSpokeEmbeddings(
    std::span<const double> target, std::size_t n, double alpha) {
  const std::size_t d = target.size();
  SCLAB_REQUIRE(alpha > 0.0 && alpha < 1.0, "HubSpoke: alpha must be in (0,1)");
  SCLAB_REQUIRE(std::abs(L2Norm(target) - 1.0) <= kUnitNormTolerance,
                "HubSpoke: target must be unit norm");
  if (d == 0 || n > d - 1) {
    throw CapacityError("HubSpoke: at most d - 1 spokes fit in dimension " +
                        std::to_string(d));
  }
  const double beta = std::sqrt(1.0 - alpha * alpha);

  // Householder vector v = b_1 - target; H = I - 2 v v^T / (v^T v).
  std::vector<double> v(target.begin(), target.end());
  for (double& x : v) x = -x;
  v[0] += 1.0;
  const double vv = Dot(v, v);
  const bool identity = vv < 1e-30;

  std::vector<EmbeddingVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EmbeddingVector e(d, 0.0);
    e[0] = alpha;
    e[i + 1] = beta;
    if (!identity) {
      const double coef = 2.0 * Dot(v, e) / vv;
      for (std::size_t j = 0; j < d; ++j) e[j] -= coef * v[j];
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

bool InBox(const Eigen::VectorXd& x, double tol) {
  return x.minCoeff() >= -tol && x.maxCoeff() <= 1.0 + tol;
}

double SimTo(const Embedder& h, const FeatureVector& x,
             const EmbeddingVector& t) {
  const auto r = h.RawEmbed(x);
  return CosineOfRaw(r, t);
}

// Closed-form start for linear maps: x = x0 + P+ (s t - P x0) hits direction
// t exactly for any s > 0. Picks the largest s (from the natural scale down)
// whose preimage fits the box, sliding along the all-ones direction when the
// map ignores it. Returns nullopt if nothing fits.
std::optional<FeatureVector> LinearStart(const Embedder& h,
                                         const EmbeddingVector& t,
                                         const FeatureVector& x0,
                                         const std::vector<bool>& frozen) {
  const Eigen::MatrixXd& p_full = *h.LinearMap();
  const std::size_t m = x0.size();
  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < m; ++j) {
    if (!frozen[j]) free_idx.push_back(j);
  }
  if (free_idx.empty()) return std::nullopt;
  const bool any_frozen = free_idx.size() != m;

  Eigen::MatrixXd pf;
  Eigen::MatrixXd pinv;
  if (any_frozen) {
    pf.resize(p_full.rows(), free_idx.size());
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      pf.col(k) = p_full.col(free_idx[k]);
    }
    pinv = pf.completeOrthogonalDecomposition().pseudoInverse();
  } else {
    pf = p_full;
    pinv = *h.LinearMapPseudoInverse();
  }
  Eigen::Map<const Eigen::VectorXd> x0v(x0.data(), m);
  Eigen::Map<const Eigen::VectorXd> tv(t.data(), t.size());
  const Eigen::VectorXd r = p_full * x0v;
  Eigen::VectorXd xf(free_idx.size());
  for (std::size_t k = 0; k < free_idx.size(); ++k) xf(k) = x0v(free_idx[k]);

  const bool can_slide =
      !any_frozen &&
      (p_full * Eigen::VectorXd::Ones(m)).norm() <= 1e-12 * p_full.norm();
  const Eigen::VectorXd a = pinv * tv;
  const Eigen::VectorXd b = pinv * r;

  double s = tv.dot(r);
  if (!(s > 0.0)) s = r.norm();
  if (!(s > 0.0)) s = 0.25 / std::max(a.cwiseAbs().maxCoeff(), 1e-12);
  for (int attempt = 0; attempt < 60; ++attempt, s *= 0.7) {
    Eigen::VectorXd cand = xf + s * a - b;
    if (can_slide) {
      const double lo = cand.minCoeff(), hi = cand.maxCoeff();
      if (hi - lo <= 1.0) {
        if (lo < 0.0) cand.array() -= lo;
        if (hi > 1.0) cand.array() -= hi - 1.0;
      }
    }
    if (!InBox(cand, 1e-12)) continue;
    FeatureVector x = x0;
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      x[free_idx[k]] = std::clamp(cand(k), 0.0, 1.0);
    }
    return x;
  }
  return std::nullopt;
}

}  // namespace

InversionResult InvertEmbedding(const Embedder& embedder,
                                std::span<const double> target,
                                const InvertOptions& options) {
  SCLAB_REQUIRE(options.steps >= 1, "InvertEmbedding: steps must be >= 1");
  SCLAB_REQUIRE(target.size() == embedder.output_dim(),
                "InvertEmbedding: target dimension mismatch");
  const std::size_t m = embedder.input_dim();
  const EmbeddingVector t = Normalize(target);

  FeatureVector x = options.init.value_or(FeatureVector(m, 0.5));
  SCLAB_REQUIRE(x.size() == m, "InvertEmbedding: init dimension mismatch");
  std::vector<bool> frozen(m, false);
  for (std::size_t j : options.frozen) {
    SCLAB_REQUIRE(j < m, "InvertEmbedding: frozen index out of range");
    frozen[j] = true;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!frozen[j]) x[j] = std::clamp(x[j], 0.0, 1.0);
  }

  InversionResult res;
  if (embedder.LinearMap() != nullptr) {
    if (auto start = LinearStart(embedder, t, x, frozen)) x = *start;
  }
  double best_sim = SimTo(embedder, x, t);
  FeatureVector best = x;

  // Projected gradient ascent on cos(h(x), t). Skipped once the start is
  // already an exact preimage.
  if (best_sim < 1.0 - 1e-13) {
    for (int k = 0; k < options.steps; ++k) {
      const auto r = embedder.RawEmbed(x);
      const double nr = L2Norm(r);
      std::vector<double> gr(r.size());
      if (nr == 0.0) {
        gr = t;
      } else {
        const double c = Dot(t, r) / nr;
        for (std::size_t i = 0; i < r.size(); ++i) {
          gr[i] = t[i] / nr - c * r[i] / (nr * nr);
        }
      }
      auto gx = embedder.VectorJacobianProduct(x, gr);
      for (std::size_t j = 0; j < m; ++j) {
        if (frozen[j]) gx[j] = 0.0;
      }
      const double gn = L2Norm(gx);
      if (gn < 1e-15) break;
      const double eta =
          options.step_size * (1.0 - static_cast<double>(k) / options.steps) +
          1e-4;
      for (std::size_t j = 0; j < m; ++j) {
        if (!frozen[j]) x[j] = std::clamp(x[j] + eta * gx[j] / gn, 0.0, 1.0);
      }
      const double sim = SimTo(embedder, x, t);
      if (sim > best_sim) {
        best_sim = sim;
        best = x;
      }
    }
  }
  res.features = std::move(best);
  res.achieved_sim = best_sim;
  if (best_sim < kInversionWarnSim) {
    res.warning = "inversion reached similarity " + std::to_string(best_sim) +
                  " < 0.9";
  }
  return res;
}

FeatureVector ApplyBackdoor(std::span<const double> x,
                            std::span<const std::size_t> indices,
                            std::span<const double> values) {
  SCLAB_REQUIRE(indices.size() == values.size(),
                "ApplyBackdoor: indices/values length mismatch");
  FeatureVector out(x.begin(), x.end());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    SCLAB_REQUIRE(indices[k] < out.size(), "ApplyBackdoor: index out of range");
    out[indices[k]] = values[k];
  }
  return out;
}

}  // namespace sclab::dedup
