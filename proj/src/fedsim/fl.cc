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

#include "sclab/fedsim/fl.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sclab/core/error.h"
#include "sclab/core/parallel.h"
#include "sclab/core/rng.h"
#include "sclab/fedsim/foolsgold.h"

namespace sclab::fedsim {
namespace {

void AddFlat(mia::ToyClassifier& m, const Eigen::VectorXd& v, double scale) {
  const Eigen::Index c = m.weights.rows(), d = m.weights.cols();
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m.weights(i, j) += scale * v(i * d + j);
  }
  for (Eigen::Index i = 0; i < c; ++i) m.bias(i) += scale * v(c * d + i);
}

struct ClientCache {
  mia::RowMatrix x;
  std::vector<int> labels;
};

ClientCache Cache(const Dataset& data, const Eigen::VectorXd& center) {
  ClientCache c{mia::CenteredMatrix(data, center), {}};
  for (const auto& e : data.examples) c.labels.push_back(e.label);
  return c;
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string_view DefenseName(Defense d) {
  return d == Defense::kNone ? "none" : "foolsgold";
}

Defense ParseDefense(std::string_view name) {
  if (name == "none") return Defense::kNone;
  if (name == "foolsgold") return Defense::kFoolsGold;
  throw ConfigError({"unknown defense \"" + std::string(name) + "\""});
}

Eigen::VectorXd Flatten(const mia::ToyClassifier& m) {
  const Eigen::Index c = m.weights.rows(), d = m.weights.cols();
  Eigen::VectorXd v(c * d + c);
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m.weights(i, j);
  }
  v.tail(c) = m.bias;
  return v;
}

FlRun RunFl(std::vector<FlClient>& clients, const mia::ToyClassifier& init,
            const FlOptions& options) {
  SCLAB_REQUIRE(!clients.empty(), "RunFl: no clients");
  const Eigen::Index flat = init.weights.size() + init.bias.size();
  std::vector<ClientCache> caches;
  for (auto& c : clients) {
    SCLAB_REQUIRE(!c.data.empty(), "RunFl: client without data");
    SCLAB_REQUIRE(c.data.FeatureDim() == init.dim(),
                  "RunFl: client data dimension differs from the model");
    c.update_history = Eigen::VectorXd::Zero(flat);
    caches.push_back(Cache(c.data, init.center));
  }
  FlRun run;
  run.models.push_back(init);
  run.loss_traces.assign(clients.size(), {});
  auto record_losses = [&](const mia::ToyClassifier& m) {
    for (std::size_t c = 0; c < clients.size(); ++c) {
      run.loss_traces[c].push_back(
          mia::MeanSoftmaxGradient(m, caches[c].x, caches[c].labels).loss);
    }
  };
  record_losses(init);

  for (std::size_t r = 0; r < options.rounds; ++r) {
    const mia::ToyClassifier& global = run.models.back();
    std::vector<std::size_t> joined;
    for (std::size_t c = 0; c < clients.size(); ++c) {
      if (clients[c].join_round <= r) joined.push_back(c);
    }
    std::vector<Eigen::VectorXd> deltas(joined.size());
    ParallelFor(joined.size(), [&](std::size_t i) {
      const auto& cache = caches[joined[i]];
      const mia::SoftmaxGrad g =
          mia::MeanSoftmaxGradient(global, cache.x, cache.labels);
      mia::ToyClassifier gm = global;
      gm.weights = g.grad_weights;
      gm.bias = g.grad_bias;
      deltas[i] = -options.lr * Flatten(gm);
    });
    std::vector<Eigen::VectorXd> histories;
    for (std::size_t i = 0; i < joined.size(); ++i) {
      clients[joined[i]].update_history += deltas[i];
      histories.push_back(clients[joined[i]].update_history);
    }
    std::vector<double> mult(joined.size(), 1.0);
    if (options.defense == Defense::kFoolsGold && joined.size() >= 2) {
      mult = FoolsGoldMultipliers(histories, options.pardoning).multipliers;
    }
    std::vector<double> round_mult(clients.size(), 0.0);
    mia::ToyClassifier next = global;
    for (std::size_t i = 0; i < joined.size(); ++i) {
      AddFlat(next, deltas[i], mult[i]);
      round_mult[joined[i]] = mult[i];
    }
    run.multipliers.push_back(std::move(round_mult));
    record_losses(next);
    run.models.push_back(std::move(next));
  }
  return run;
}

MembershipScore ClientMembershipAttack(std::span<const double> loss_trace,
                                       std::size_t join_round,
                                       std::size_t window, double threshold) {
  SCLAB_REQUIRE(window >= 1, "window must be >= 1");
  SCLAB_REQUIRE(join_round >= window, "join round earlier than the window");
  SCLAB_REQUIRE(loss_trace.size() >= join_round + window,
                "loss trace shorter than join round + window");
  MembershipScore s;
  s.score = Mean(loss_trace.subspan(join_round - window, window)) -
            Mean(loss_trace.subspan(join_round, window));
  s.absent = s.score > threshold;
  return s;
}

void FoolsGoldConfig::Validate() const {
  SCLAB_REQUIRE(n_clients >= 2, "n_clients must be >= 2");
  SCLAB_REQUIRE(classes >= 2, "classes must be >= 2");
  SCLAB_REQUIRE(dim >= 1, "dim must be >= 1");
  SCLAB_REQUIRE(examples_per_client >= 1 && attacker_examples >= 1,
                "clients need data");
  SCLAB_REQUIRE(majority_fraction >= 0 && majority_fraction <= 1,
                "majority_fraction must be in [0, 1]");
  SCLAB_REQUIRE(dirichlet_alpha > 0, "dirichlet_alpha must be > 0");
  SCLAB_REQUIRE(join_round >= window && rounds >= join_round + window,
                "rounds must cover join_round +- window");
  SCLAB_REQUIRE(!target_classes.empty() && !seeds.empty() &&
                    !calibration_seeds.empty(),
                "need target classes, seeds and calibration seeds");
  for (int t : target_classes) {
    SCLAB_REQUIRE(t >= 0 && t < classes &&
                      static_cast<std::size_t>(t) < n_clients,
                  "target class must be some client's majority class");
  }
}

FoolsGoldRun RunFoolsGoldOnce(const FoolsGoldConfig& config,
                              std::uint64_t run_seed, int target_class,
                              bool target_present) {
  config.Validate();
  // The world depends on the run seed only, so present and absent runs share
  // every client but the target.
  Rng rng(SplitSeed(config.seed, "fl_world", run_seed));
  const BlobSpec spec{config.classes, config.dim, config.center_lo,
                      config.center_hi, config.noise_std};
  const auto centers = MakeBlobCenters(spec, rng);
  ExampleId next_id = 0;
  std::vector<FlClient> clients;
  for (std::size_t c = 0; c < config.n_clients; ++c) {
    const int major = static_cast<int>(c) % config.classes;
    FlClient client;
    client.id = static_cast<int>(c);
    const std::size_t n_major = static_cast<std::size_t>(
        std::llround(config.majority_fraction * config.examples_per_client));
    std::vector<double> alpha(config.classes - 1, config.dirichlet_alpha);
    const std::vector<double> mix = rng.Dirichlet(alpha);
    for (std::size_t i = 0; i < config.examples_per_client; ++i) {
      int label = major;
      if (i >= n_major) {
        double u = rng.Uniform(), acc = 0;
        int pick = config.classes - 2;
        for (int j = 0; j + 1 < config.classes; ++j) {
          acc += mix[j];
          if (u < acc) {
            pick = j;
            break;
          }
        }
        label = pick < major ? pick : pick + 1;
      }
      client.data.examples.push_back(
          SampleBlobPoint(spec, centers, label, next_id++, rng));
    }
    if (major == target_class && !target_present) continue;
    clients.push_back(std::move(client));
  }
  FlClient attacker;
  attacker.id = static_cast<int>(config.n_clients);
  attacker.is_attacker = true;
  attacker.join_round = config.join_round;
  for (std::size_t i = 0; i < config.attacker_examples; ++i) {
    attacker.data.examples.push_back(
        SampleBlobPoint(spec, centers, target_class, next_id++, rng));
  }
  clients.push_back(std::move(attacker));

  const FlRun run = RunFl(
      clients, mia::MakeUniformClassifier(config.classes, config.dim),
      {config.rounds, config.lr, config.defense, config.pardoning});
  FoolsGoldRun out;
  out.attacker_trace = run.loss_traces.back();
  out.side_channel_score =
      ClientMembershipAttack(out.attacker_trace, config.join_round,
                             config.window)
          .score;
  out.loss_level = Mean(std::span<const double>(out.attacker_trace)
                            .subspan(config.join_round, config.window));
  return out;
}

AttackReport RunFoolsGoldAttack(const FoolsGoldConfig& config) {
  config.Validate();
  struct Job {
    std::uint64_t seed;
    int target;
    bool present;
    bool calibration;
  };
  std::vector<Job> jobs;
  for (bool calib : {true, false}) {
    for (std::uint64_t s : calib ? config.calibration_seeds : config.seeds) {
      for (int t : config.target_classes) {
        for (bool present : {true, false}) jobs.push_back({s, t, present, calib});
      }
    }
  }
  std::vector<FoolsGoldRun> runs(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t i) {
    runs[i] = RunFoolsGoldOnce(config, jobs[i].seed, jobs[i].target,
                               jobs[i].present);
  });

  auto midpoint = [&](bool calib, auto stat) {
    double sum[2] = {0, 0};
    std::size_t cnt[2] = {0, 0};
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].calibration != calib) continue;
      sum[jobs[i].present] += stat(runs[i]);
      ++cnt[jobs[i].present];
    }
    const double absent = sum[0] / cnt[0], present = sum[1] / cnt[1];
    return std::pair{(absent + present) / 2, absent > present};
  };
  const auto [theta, theta_absent_high] =
      midpoint(true, [](const FoolsGoldRun& r) { return r.side_channel_score; });
  const auto [base_theta, base_absent_high] =
      midpoint(false, [](const FoolsGoldRun& r) { return r.loss_level; });

  AttackReport report;
  report.scenario_name = "foolsgold";
  report.seed = config.seed;
  std::size_t correct = 0, base_correct = 0, total = 0;
  Json per_run = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].calibration) continue;
    const FoolsGoldRun& r = runs[i];
    const bool say_absent = theta_absent_high ? r.side_channel_score > theta
                                              : r.side_channel_score < theta;
    const bool base_absent = base_absent_high ? r.loss_level > base_theta
                                              : r.loss_level < base_theta;
    correct += say_absent != jobs[i].present;
    base_correct += base_absent != jobs[i].present;
    ++total;
    // Larger score means "absent"; negate so larger means member.
    report.scores.push_back({-r.side_channel_score, jobs[i].present});
    per_run.push_back({{"seed", jobs[i].seed},
                       {"target_class", jobs[i].target},
                       {"present", jobs[i].present},
                       {"score", r.side_channel_score},
                       {"loss_level", r.loss_level}});
  }
  report.ComputeRoc();
  report.query_count = static_cast<std::int64_t>(total);
  const double acc = static_cast<double>(correct) / static_cast<double>(total);
  const double base = static_cast<double>(base_correct) / static_cast<double>(total);
  report.extra["defense"] = std::string(DefenseName(config.defense));
  report.extra["pardoning"] = config.pardoning;
  report.extra["threshold"] = theta;
  report.extra["side_channel_accuracy"] = acc;
  report.extra["baseline_threshold"] = base_theta;
  report.extra["baseline_accuracy"] = base;
  report.extra["runs"] = total;
  report.extra["per_run"] = std::move(per_run);
  return report;
}

}  // namespace sclab::fedsim
