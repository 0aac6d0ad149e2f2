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

#ifndef SCLAB_CORE_DATASET_H_
#define SCLAB_CORE_DATASET_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace sclab {

using FeatureVector = std::vector<double>;
using ExampleId = std::int64_t;

// One labeled training point. Images are abstracted as feature vectors in
// [0,1]^m.
struct FeatureExample {
  FeatureVector features;
  int label = 0;
  ExampleId id = 0;
};

enum class Provenance { kOriginal, kPoisoned, kDeduplicated };

std::string_view ProvenanceName(Provenance p);

struct Dataset {
  std::vector<FeatureExample> examples;
  Provenance provenance = Provenance::kOriginal;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  // Number of classes implied by the largest label (max label + 1).
  int NumClasses() const;
  std::size_t FeatureDim() const;

  // Throws ContractViolation on non-finite or out-of-box features, negative
  // labels, inconsistent dimensions or duplicate ids.
  void Validate() const;
};

// Isotropic Gaussian class blobs clipped to the unit box. Centers are drawn
// uniformly from [center_lo, center_hi]^m.
struct BlobSpec {
  int num_classes = 2;
  std::size_t dim = 48;
  double center_lo = 0.2;
  double center_hi = 0.8;
  double noise_std = 0.1;
};

class Rng;

// Draws the class centers only; use SampleBlobs to draw points around them.
std::vector<FeatureVector> MakeBlobCenters(const BlobSpec& spec, Rng& rng);

FeatureExample SampleBlobPoint(const BlobSpec& spec,
                               const std::vector<FeatureVector>& centers,
                               int label, ExampleId id, Rng& rng);

// n points with round-robin labels, ids first_id, first_id+1, ...
Dataset SampleBlobs(const BlobSpec& spec,
                    const std::vector<FeatureVector>& centers, std::size_t n,
                    ExampleId first_id, Rng& rng);

double Clamp01(double x);

}  // namespace sclab

#endif  // SCLAB_CORE_DATASET_H_
