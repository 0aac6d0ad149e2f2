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

#ifndef SCLAB_DPAUDIT_AUDIT_H_
#define SCLAB_DPAUDIT_AUDIT_H_

#include <cstddef>
#include <cstdint>

#include "sclab/core/report.h"
#include "sclab/dpaudit/dp.h"

namespace sclab::dpaudit {

// Two worlds share a fixed background set and a fixed set of mislabeled
// hub-and-spoke duplicates of one target; the "present" world also holds the
// target. Each world's data goes through approximate delete-all dedup (unless
// apply_dedup is false) and then DP-SGD. A likelihood-ratio test on the mean
// logit-confidence of the duplicates (of the target itself in the control)
// labels each evaluation model, and the counts give an empirical epsilon.
struct DpAuditConfig {
  std::size_t n_duplicates = 64;
  bool apply_dedup = true;
  double alpha = 0.9;
  std::size_t embed_dim = 72;
  std::uint64_t embedder_seed = 1;
  std::size_t feature_dim = 80;
  int num_classes = 5;
  std::size_t background_size = 500;
  double noise_std = 0.15;
  double center_lo = 0.35;
  double center_hi = 0.65;
  DpConfig dp;
  // Per world.
  std::size_t eval_models = 128;
  std::size_t shadow_models = 32;
  double confidence = 0.95;
  int inversion_steps = 1000;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct DpAuditResult {
  AttackReport report;
  PrivacyBudget accountant;
  PrivacyBudget empirical;
};

// Report scores: member-direction score per evaluation model, member = the
// target is present. extra holds the audit JSON (eps_accountant, delta,
// eps_empirical, confidence, worlds, attack_tpr_fpr) plus diagnostics.
DpAuditResult RunDpDedupAudit(const DpAuditConfig& config);

}  // namespace sclab::dpaudit

#endif  // SCLAB_DPAUDIT_AUDIT_H_
