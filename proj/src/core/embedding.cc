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

#include "sclab/core/embedding.h"

#include <algorithm>
#include <cmath>

#include "sclab/core/error.h"

namespace sclab {

double Dot(std::span<const double> a, std::span<const double> b) {
  SCLAB_REQUIRE(a.size() == b.size(), "Dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double L2Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

EmbeddingVector Normalize(std::span<const double> v) {
  const double n = L2Norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NumericalError("Normalize: zero or non-finite vector");
  }
  EmbeddingVector out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

double CosineSim(std::span<const double> u, std::span<const double> v) {
  SCLAB_REQUIRE(u.size() == v.size(), "CosineSim: dimension mismatch");
  SCLAB_REQUIRE(std::abs(L2Norm(u) - 1.0) <= kUnitNormTolerance,
                "CosineSim: first argument is not unit norm");
  SCLAB_REQUIRE(std::abs(L2Norm(v) - 1.0) <= kUnitNormTolerance,
                "CosineSim: second argument is not unit norm");
  return std::clamp(Dot(u, v), -1.0, 1.0);
}

double CosineOfRaw(std::span<const double> u, std::span<const double> v) {
  const double nu = L2Norm(u);
  const double nv = L2Norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(Dot(u, v) / (nu * nv), -1.0, 1.0);
}

}  // namespace sclab
