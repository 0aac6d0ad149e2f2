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

#include "sclab/core/dataset.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"

namespace sclab {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kOriginal:
      return "original";
    case Provenance::kPoisoned:
      return "poisoned";
    case Provenance::kDeduplicated:
      return "deduplicated";
  }
  return "unknown";
}

int Dataset::NumClasses() const {
  int c = 0;
  for (const auto& ex : examples) c = std::max(c, ex.label + 1);
  return c;
}

std::size_t Dataset::FeatureDim() const {
  return examples.empty() ? 0 : examples.front().features.size();
}

void Dataset::Validate() const {
  std::unordered_set<ExampleId> ids;
  const std::size_t dim = FeatureDim();
  for (const auto& ex : examples) {
    if (ex.features.size() != dim) {
      throw ContractViolation("dataset: inconsistent feature dimension at id " +
                              std::to_string(ex.id));
    }
    for (double v : ex.features) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ContractViolation("dataset: feature outside [0,1] at id " +
                                std::to_string(ex.id));
      }
    }
    if (ex.label < 0) {
      throw ContractViolation("dataset: negative label at id " +
                              std::to_string(ex.id));
    }
    if (!ids.insert(ex.id).second) {
      throw ContractViolation("dataset: duplicate id " + std::to_string(ex.id));
    }
  }
}

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::vector<FeatureVector> MakeBlobCenters(const BlobSpec& spec, Rng& rng) {
  std::vector<FeatureVector> centers(spec.num_classes);
  for (auto& c : centers) {
    c.resize(spec.dim);
    for (double& v : c) v = rng.Uniform(spec.center_lo, spec.center_hi);
  }
  return centers;
}

FeatureExample SampleBlobPoint(const BlobSpec& spec,
                               const std::vector<FeatureVector>& centers,
                               int label, ExampleId id, Rng& rng) {
  FeatureExample ex;
  ex.label = label;
  ex.id = id;
  ex.features.resize(spec.dim);
  const auto& c = centers.at(label);
  for (std::size_t j = 0; j < spec.dim; ++j) {
    ex.features[j] = Clamp01(c[j] + spec.noise_std * rng.Normal());
  }
  return ex;
}

Dataset SampleBlobs(const BlobSpec& spec,
                    const std::vector<FeatureVector>& centers, std::size_t n,
                    ExampleId first_id, Rng& rng) {
  Dataset ds;
  ds.examples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % centers.size());
    ds.examples.push_back(SampleBlobPoint(
        spec, centers, label, first_id + static_cast<ExampleId>(i), rng));
  }
  return ds;
}

}  // namespace sclab
