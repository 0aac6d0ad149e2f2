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

#ifndef SCLAB_CORE_EMBEDDING_H_
#define SCLAB_CORE_EMBEDDING_H_

#include <span>
#include <vector>

namespace sclab {

// Unit-norm vector used for similarity decisions. Construct through
// Normalize; the raw coordinates are otherwise unchecked.
using EmbeddingVector = std::vector<double>;

// Tolerance on |norm - 1| accepted by CosineSim.
inline constexpr double kUnitNormTolerance = 1e-6;

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> a);

// Throws NumericalError on a zero or non-finite vector.
EmbeddingVector Normalize(std::span<const double> v);

// Dot product of two unit vectors. Throws ContractViolation when either input
// is not unit norm or the dimensions differ. Result clamped to [-1, 1].
double CosineSim(std::span<const double> u, std::span<const double> v);

// Cosine of arbitrary nonzero vectors; 0 if either has zero norm.
double CosineOfRaw(std::span<const double> u, std::span<const double> v);

}  // namespace sclab

#endif  // SCLAB_CORE_EMBEDDING_H_
