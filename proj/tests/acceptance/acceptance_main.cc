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

// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Usage: acceptance [criterion numbers...]; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sclab/cli/scenario.h"
#include "sclab/core/embedding.h"
#include "sclab/core/rng.h"
#include "sclab/dedup/attack.h"
#include "sclab/dedup/dedup.h"
#include "sclab/dedup/embedder.h"
#include "sclab/dedup/poison.h"
#include "sclab/dpaudit/audit.h"
#include "sclab/fedsim/clustering.h"
#include "sclab/fedsim/fl.h"
#include "sclab/memfilter/filter.h"
#include "sclab/memfilter/ngram.h"
#include "sclab/memfilter/scenario.h"
#include "sclab/queryfilter/scenario.h"
#include "sclab/textdedup/scenario.h"
#include "sclab/tokenizer/scenario.h"

namespace sclab {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string Fmt(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

double TprAt(const AttackReport& r, double level) {
  return r.tpr_at_fpr.at(level);
}

// 1. Hub-and-spoke geometry on random unit targets.
Outcome HubSpokeGeometry() {
  Rng rng(101);
  double worst_hub = 0.0, worst_pair = 0.0;
  int cases = 0;
  for (std::size_t d : {8u, 64u}) {
    for (double alpha : {0.8, 0.9, 0.99}) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> raw(d);
        for (double& v : raw) v = rng.Normal();
        const EmbeddingVector target = Normalize(raw);
        const std::size_t n =
            trial == 0 ? d - 1 : 1 + rng.UniformInt(d - 1);
        const auto spokes = dedup::HubSpokeEmbeddings(target, n, alpha);
        if (spokes.size() != n) return {false, "wrong spoke count"};
        for (std::size_t i = 0; i < n; ++i) {
          worst_hub = std::max(worst_hub,
                               std::abs(Dot(target, spokes[i]) - alpha));
          for (std::size_t j = i + 1; j < n; ++j) {
            worst_pair = std::max(
                worst_pair,
                std::abs(Dot(spokes[i], spokes[j]) - alpha * alpha));
          }
        }
        ++cases;
      }
    }
  }
  const bool ok = worst_hub < 1e-9 && worst_pair < 1e-9;
  return {ok, std::to_string(cases) + " cases, max |sim(t,e)-a|=" +
                  Fmt("%.2e", worst_hub) + ", max |sim(e,e')-a^2|=" +
                  Fmt("%.2e", worst_pair) + " (< 1e-9)"};
}

dedup::DedupAttackConfig DedupBase() {
  dedup::DedupAttackConfig c;
  c.n_targets = 250;
  c.shadow_models = 64;
  c.seed = 2;
  return c;
}

// 2. Exact delete-all with one duplicate against the plain attack.
Outcome DedupExact() {
  auto c = DedupBase();
  c.n_duplicates = 1;
  c.policy = dedup::DedupPolicy::Exact(dedup::Deletion::kDeleteAll);
  const AttackReport attack = dedup::RunDedupAttack(c);
  c.apply_dedup = false;
  const AttackReport control = dedup::RunDedupAttack(c);
  const double a = TprAt(attack, 0.001), b = TprAt(control, 0.001);
  return {a >= 0.95 && b <= 0.2,
          "TPR@0.1%FPR=" + Fmt("%.4f", a) + " (>= 0.95), no-dedup control=" +
              Fmt("%.4f", b) + " (<= 0.2), " +
              std::to_string(attack.scores.size()) + " scores"};
}

// 3. Approximate delete-all-but-one with 8 spokes; one exact duplicate under
// delete-all-but-one must do worse.
Outcome DedupSpokes() {
  auto c = DedupBase();
  c.n_duplicates = 8;
  c.policy = dedup::DedupPolicy::Approximate(dedup::Deletion::kDeleteAllButOne,
                                             dedup::kDefaultAlpha);
  const AttackReport spokes = dedup::RunDedupAttack(c);
  c.n_duplicates = 1;
  c.policy = dedup::DedupPolicy::Exact(dedup::Deletion::kDeleteAllButOne);
  const AttackReport single = dedup::RunDedupAttack(c);
  const double a = TprAt(spokes, 0.001), b = TprAt(single, 0.001);
  return {a >= 0.85 && b < a,
          "8 spokes TPR@0.1%FPR=" + Fmt("%.4f", a) +
              " (>= 0.85), single exact duplicate=" + Fmt("%.4f", b) +
              " (< spokes)"};
}

// 4. Spokes built at alpha_guess, dedup run at alpha_real.
Outcome AlphaRobustness() {
  Rng rng(404);
  const dedup::LinearEmbedder h(12, 24, 3);
  int runs = 0, bad = 0;
  for (double real : {0.8, 0.85, 0.9, 0.95}) {
    const double hi = std::min(1.02 * real, std::sqrt(real));
    for (int g = 0; g < 6; ++g) {
      // Both ends of [real, hi) and interior points.
      const double guess =
          g == 0 ? real : real + (hi - real) * (g == 5 ? 0.999 : rng.Uniform());
      if (!(guess * guess < real && real <= guess)) continue;
      FeatureVector target(24);
      for (double& v : target) v = 0.3 + 0.4 * rng.Uniform();
      const auto spokes = dedup::HubSpokeEmbeddings(h.Embed(target), 8, guess);
      Dataset absent;
      for (std::size_t i = 0; i < spokes.size(); ++i) {
        dedup::InvertOptions opt;
        opt.init = target;
        absent.examples.push_back(
            {dedup::InvertEmbedding(h, spokes[i], opt).features, 1,
             static_cast<ExampleId>(1 + i)});
      }
      Dataset present = absent;
      present.examples.insert(present.examples.begin(), {target, 0, 0});
      const auto policy =
          dedup::DedupPolicy::Approximate(dedup::Deletion::kDeleteAllButOne, real);
      const std::uint64_t seed = static_cast<std::uint64_t>(runs);
      const std::size_t kept_absent =
          dedup::ApplyPolicy(absent, policy, &h, seed).size();
      const std::size_t kept_present =
          dedup::ApplyPolicy(present, policy, &h, seed).size();
      bad += kept_absent != 8 || kept_present != 1;
      ++runs;
    }
  }
  return {bad == 0 && runs > 0,
          std::to_string(runs - bad) + "/" + std::to_string(runs) +
              " (alpha_real, alpha_guess) pairs keep 8 spokes when absent and "
              "1 survivor when present"};
}

// 5. Text attribute inference.
Outcome TextAttr() {
  textdedup::TextAttrConfig c;
  c.seed = 5;
  const AttackReport r = textdedup::RunTextAttr(c);
  const int correct = r.extra["correct"];
  const int collapse = r.extra["collapse_property_holds"];
  return {correct >= 19 && collapse == 20,
          "correct " + std::to_string(correct) + "/20 (>= 19), collapse " +
              std::to_string(collapse) + "/20 (= 20)"};
}

// 6. FoolsGold client membership.
Outcome FoolsGold() {
  fedsim::FoolsGoldConfig c;
  const AttackReport r = fedsim::RunFoolsGoldAttack(c);
  const double acc = r.extra["side_channel_accuracy"];
  const double base = r.extra["baseline_accuracy"];
  const int runs = r.extra["runs"];
  return {runs == 40 && acc >= 0.80 && acc - base >= 0.10 - 1e-12,
          "side channel " + Fmt("%.3f", acc) + " (>= 0.80), baseline " +
              Fmt("%.3f", base) + ", gap " + Fmt("%.3f", acc - base) +
              " (>= 0.10) over " + std::to_string(runs) +
              " runs (10 seeds x 2 targets x present/absent)"};
}

// 7. Activation clustering.
Outcome ActivationClustering() {
  fedsim::ActivationClusteringConfig c;
  c.seed = 7;
  const AttackReport r = fedsim::RunActivationClustering(c);
  const int errors = r.extra["nonmember_errors"];
  const Json& precision = r.extra["membership_precision"];
  return {errors == 0 && r.scores.size() == 50,
          "false-present " + std::to_string(errors) +
              "/50 (= 0); membership precision " + precision.dump() +
              " (reported only)"};
}

// 8. Vocabulary extraction.
Outcome VocabExtract() {
  tokenizer::VocabExtractConfig c;
  c.seed = 8;
  const AttackReport r = tokenizer::RunVocabExtract(c);
  const int exact = r.extra["exact_recoveries"];
  const bool counts = r.extra["query_counts_match_audit"];
  return {exact == 100 && counts,
          "exact " + std::to_string(exact) + "/100, audited queries " +
              std::to_string(r.query_count) +
              (counts ? " match" : " do NOT match") + " the counted calls"};
}

TokenCorpus RandomCorpus(Rng& rng, std::size_t docs, std::size_t len,
                         int alphabet) {
  TokenCorpus c;
  for (std::size_t d = 0; d < docs; ++d) {
    TokenSeq doc(len);
    for (auto& t : doc) t = static_cast<Token>(rng.UniformInt(alphabet));
    c.documents.push_back(doc);
  }
  return c;
}

// 9. Filtered decoding audit and the non-membership property.
Outcome MemorizationFilter() {
  using memfilter::MiVerdict;
  Rng rng(909);
  std::size_t decodes = 0, emitted = 0, leaks = 0;
  std::size_t mi_checked = 0, false_nonmember = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t k = 3 + trial % 4;
    const std::size_t docs = 1 + rng.UniformInt(5);
    const TokenCorpus c =
        RandomCorpus(rng, docs, 10000 / docs, 3 + 2 * trial);
    std::set<TokenSeq> truth;
    for (const auto& d : c.documents) {
      for (std::size_t i = 0; i + k <= d.size(); ++i) {
        truth.emplace(d.begin() + i, d.begin() + i + k);
      }
    }
    memfilter::NGramLm lm;
    lm.Train(c);
    for (double fp : {0.0, 0.01}) {
      const auto f = memfilter::BuildFilter(c, k, fp);
      memfilter::FilteredLm sys(lm, f);
      // Every prompt position.
      for (const auto& doc : c.documents) {
        for (std::size_t i = k - 1; i < doc.size(); ++i) {
          std::span<const Token> prompt(doc.data() + (i - (k - 1)), k - 1);
          const TokenSeq out = sys.Decode(prompt, 4);
          ++decodes;
          TokenSeq all(prompt.begin(), prompt.end());
          for (Token t : out) {
            if (t == memfilter::kEndOfOutput) break;
            all.push_back(t);
            const TokenSeq w(all.end() - k, all.end());
            ++emitted;
            leaks += f.Contains(w) || truth.count(w) > 0;
          }
        }
      }
    }
    // Every training window of length 2k is never called a nonmember, by
    // either test.
    const auto f = memfilter::BuildFilter(c, k, 0.0);
    auto permanent = memfilter::BuildFilter(c, k, 0.0);
    permanent.set_toggle(memfilter::FilterToggle::kPermanent);
    memfilter::FilteredLm sys(lm, f);
    memfilter::FilteredLm perm(lm, permanent);
    const std::size_t len = 2 * k;
    for (const auto& doc : c.documents) {
      for (std::size_t i = 0; i + len <= doc.size(); i += 1 + trial / 2) {
        std::span<const Token> target(doc.data() + i, len);
        false_nonmember += memfilter::MiToggleable(sys, target).verdict ==
                           MiVerdict::kNonmember;
        false_nonmember += memfilter::MiPermanent(perm, target.first(k),
                                                  target.subspan(k))
                               .verdict == MiVerdict::kNonmember;
        mi_checked += 2;
      }
    }
  }
  return {leaks == 0 && false_nonmember == 0,
          std::to_string(decodes) + " decodes, " + std::to_string(emitted) +
              " emitted tokens, filtered k-grams emitted " +
              std::to_string(leaks) + " (= 0); " +
              std::to_string(mi_checked) + " member tests, nonmember verdicts " +
              std::to_string(false_nonmember) + " (= 0)"};
}

// 10. Secret extraction.
Outcome SecretExtraction() {
  memfilter::SecretExtractConfig c;
  c.seed = 10;
  const AttackReport bloom = memfilter::RunSecretExtraction(c);
  c.fp_rate = 0.0;
  const AttackReport exact = memfilter::RunSecretExtraction(c);
  const int a = bloom.extra["recovered"], b = exact.extra["recovered"];
  return {a >= 45 && b == 50,
          "fp 1e-6: " + std::to_string(a) + "/50 (>= 45), fp 0: " +
              std::to_string(b) + "/50 (= 50)"};
}

// 11. DP audit.
Outcome DpAudit() {
  dpaudit::DpAuditConfig c;
  c.seed = 11;
  const auto with = dpaudit::RunDpDedupAudit(c);
  c.apply_dedup = false;
  const auto control = dpaudit::RunDpDedupAudit(c);
  const double acc = with.accountant.epsilon;
  const double e = with.empirical.epsilon, ec = control.empirical.epsilon;
  return {acc <= 1.0 && e > acc && ec <= control.accountant.epsilon,
          "eps_accountant=" + Fmt("%.3f", acc) + " (<= 1), eps_hat=" +
              Fmt("%.3f", e) + " (> eps_accountant), control eps_hat=" +
              Fmt("%.3f", ec) + " (<= eps_accountant), 95% confidence"};
}

// 12. Query filter replay.
Outcome QueryFilter() {
  queryfilter::QueryFilterConfig c;
  c.seed = 12;
  const AttackReport r = queryfilter::RunQueryFilter(c);
  const double tpr = r.extra["tpr"], fpr = r.extra["fpr"];
  return {tpr == 1.0 && fpr == 0.0,
          "TPR=" + Fmt("%.4f", tpr) + " (= 1), FPR=" + Fmt("%.4f", fpr) +
              " (= 0) over 1000 + 1000 replays"};
}

// 13. Every scenario kind twice with the same config and seed.
Outcome Determinism() {
  // Parsed from text, as a config file would be, so counts are unsigned.
  const Json params = Json::parse(R"({
      "dedup_attack": {"n_targets": 4, "shadow_models": 8, "eval_models": 2},
      "text_attr": {"trials": 3},
      "foolsgold": {"seeds": [0, 1], "calibration_seeds": [100, 101],
                    "target_classes": [0]},
      "activation_clustering": {"trials": 5},
      "vocab_extract": {"n_vocabs": 3},
      "memfilter_mi": {"n_members": 10, "n_nonmembers": 10},
      "secret_extract": {"n_secrets": 3, "prior_bytes": 200000},
      "dp_audit": {"eval_models": 8, "shadow_models": 4,
                   "background_size": 100},
      "query_filter": {"n_queried": 100, "n_heldout": 100,
                       "collision_pairs": 1000}})");
  std::vector<std::string> differing;
  int same = 0;
  for (auto kind : cli::ScenarioKinds()) {
    Json config = Json::parse(R"({"seed": 13})");
    config["kind"] = std::string(kind);
    config["params"] = params.at(std::string(kind));
    const auto a = cli::RunScenario(config);
    const auto b = cli::RunScenario(config);
    if (a.report.dump() == b.report.dump() && a.roc_csv == b.roc_csv) {
      ++same;
    } else {
      differing.emplace_back(kind);
    }
  }
  std::string detail = std::to_string(same) + "/" +
                       std::to_string(cli::ScenarioKinds().size()) +
                       " kinds give identical reports";
  for (const auto& k : differing) detail += "; differs: " + k;
  return {differing.empty(), detail};
}

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> all = {
      {1, "hub_spoke_geometry", 1, HubSpokeGeometry},
      {2, "dedup_exact_delete_all", 300, DedupExact},
      {3, "dedup_spokes_delete_all_but_one", 600, DedupSpokes},
      {4, "alpha_robustness", 30, AlphaRobustness},
      {5, "text_attribute_inference", 60, TextAttr},
      {6, "foolsgold_membership", 300, FoolsGold},
      {7, "activation_clustering", 120, ActivationClustering},
      {8, "vocabulary_extraction", 120, VocabExtract},
      {9, "memorization_filter", 60, MemorizationFilter},
      {10, "secret_extraction", 600, SecretExtraction},
      {11, "dp_audit", 1800, DpAudit},
      {12, "query_filter_replay", 10, QueryFilter},
      {13, "determinism", 600, Determinism},
  };
  return all;
}

}  // namespace
}  // namespace sclab

int main(int argc, char** argv) {
  using Clock = std::chrono::steady_clock;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : sclab::Criteria()) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = Clock::now();
    sclab::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %2d %s: %s; %.1f s (budget %.0f s%s)\n",
                pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_seconds, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
