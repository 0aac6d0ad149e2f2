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

#include "sclab/mia/lira.h"

#include <cmath>
#include <numbers>
#include <string>

#include "sclab/core/error.h"

namespace sclab::mia {

double Gaussian::LogDensity(std::span<const double> x) const {
  const Eigen::Index d = mean.size();
  SCLAB_REQUIRE(static_cast<Eigen::Index>(x.size()) == d,
                "LiraScore: query dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> v(x.data(), d);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Gaussian: covariance not positive definite");
  }
  const Eigen::VectorXd diff = v - mean;
  const Eigen::VectorXd z = llt.matrixL().solve(diff);
  const auto& l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lii = l(i, i);
    if (!(lii > 0.0)) throw NumericalError("Gaussian: singular covariance");
    logdet += 2.0 * std::log(lii);
  }
  return -0.5 * (z.squaredNorm() + logdet +
                 static_cast<double>(d) * std::log(2.0 * std::numbers::pi));
}

Gaussian FitGaussian(const std::vector<std::vector<double>>& samples,
                     double lambda) {
  SCLAB_REQUIRE(samples.size() >= 2, "FitGaussian: need at least 2 samples");
  const std::size_t d = samples.front().size();
  SCLAB_REQUIRE(d > 0, "FitGaussian: zero-dimensional samples");
  for (const auto& s : samples) {
    SCLAB_REQUIRE(s.size() == d, "FitGaussian: ragged samples");
  }
  const double n = static_cast<double>(samples.size());
  Gaussian g;
  g.mean = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) {
    g.mean += Eigen::Map<const Eigen::VectorXd>(s.data(), d);
  }
  g.mean /= n;
  g.cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& s : samples) {
    const Eigen::VectorXd diff =
        Eigen::Map<const Eigen::VectorXd>(s.data(), d) - g.mean;
    g.cov.noalias() += diff * diff.transpose();
  }
  g.cov /= n;
  g.diagonal = samples.size() < d + 1;
  if (g.diagonal) g.cov = Eigen::MatrixXd(g.cov.diagonal().asDiagonal());
  g.cov.diagonal().array() += lambda;
  return g;
}

GaussianPair FitGaussians(const std::vector<std::vector<double>>& in_vectors,
                          const std::vector<std::vector<double>>& out_vectors,
                          double lambda) {
  GaussianPair p{FitGaussian(in_vectors, lambda),
                 FitGaussian(out_vectors, lambda)};
  SCLAB_REQUIRE(p.in.mean.size() == p.out.mean.size(),
                "FitGaussians: in/out dimension mismatch");
  return p;
}

double LiraScore(const GaussianPair& pair, std::span<const double> query) {
  return pair.in.LogDensity(query) - pair.out.LogDensity(query);
}

Json ShadowManifest::ToJson() const {
  std::string bits;
  bits.reserve(inclusion.size());
  for (bool b : inclusion) bits.push_back(b ? '1' : '0');
  return Json{{"seed", seed}, {"inclusion", bits}};
}

ShadowManifest ShadowManifest::FromJson(const Json& j) {
  ShadowManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  const std::string bits = j.at("inclusion").get<std::string>();
  for (char c : bits) {
    SCLAB_REQUIRE(c == '0' || c == '1', "ShadowManifest: bad inclusion bit");
    m.inclusion.push_back(c == '1');
  }
  return m;
}

}  // namespace sclab::mia
