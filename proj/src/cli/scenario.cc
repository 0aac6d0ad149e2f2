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

#include "sclab/cli/scenario.h"

#include <array>
#include <cstdio>
#include <functional>
#include <set>
#include <type_traits>
#include <utility>
#include <vector>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/dedup/attack.h"
#include "sclab/dpaudit/audit.h"
#include "sclab/fedsim/clustering.h"
#include "sclab/fedsim/fl.h"
#include "sclab/memfilter/scenario.h"
#include "sclab/queryfilter/scenario.h"
#include "sclab/textdedup/scenario.h"
#include "sclab/tokenizer/scenario.h"

namespace sclab::cli {
namespace {

constexpr std::array<std::string_view, 9> kKinds = {
    "dedup_attack",  "text_attr",      "foolsgold",
    "activation_clustering", "vocab_extract", "memfilter_mi",
    "secret_extract", "dp_audit",      "query_filter"};

template <typename T>
struct IsVector : std::false_type {};
template <typename T>
struct IsVector<std::vector<T>> : std::true_type {};

// Reads known fields of one JSON object, recording every problem instead of
// stopping at the first.
class Reader {
 public:
  Reader(const Json* obj, std::string path, std::vector<std::string>& problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (obj_ != nullptr && !obj_->is_object()) {
      problems_.push_back(path_ + ": expected an object");
      obj_ = nullptr;
    }
  }
  ~Reader() {
    if (obj_ == nullptr) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.count(key)) problems_.push_back(Name(key) + ": unknown field");
    }
  }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  template <typename T>
  void Get(const std::string& key, T& out) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    if (!TypeOk<T>(*j)) {
      problems_.push_back(Name(key) + ": wrong type");
      return;
    }
    out = j->get<T>();
  }

  void Get(const std::string& key, std::optional<double>& out) {
    double v = 0;
    if (Find(key) == nullptr) return;
    const std::size_t before = problems_.size();
    Get(key, v);
    if (problems_.size() == before) out = v;
  }

  // Enum through a parser that throws on unknown names.
  template <typename E, typename Parse>
  void GetEnum(const std::string& key, E& out, Parse parse) {
    std::string s;
    if (Find(key) == nullptr) return;
    const std::size_t before = problems_.size();
    Get(key, s);
    if (problems_.size() != before) return;
    try {
      out = parse(s);
    } catch (const std::exception&) {
      problems_.push_back(Name(key) + ": unknown value \"" + s + "\"");
    }
  }

  // Marks the field as known and returns it unread (null when absent).
  const Json* Raw(const std::string& key) { return Find(key); }

  // Nested object; `fn` reads it.
  void Sub(const std::string& key, const std::function<void(Reader&)>& fn) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    Reader r(j, Name(key), problems_);
    fn(r);
  }

 private:
  std::string Name(const std::string& key) const { return path_ + "." + key; }

  const Json* Find(const std::string& key) {
    seen_.insert(key);
    if (obj_ == nullptr) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  template <typename T>
  static bool TypeOk(const Json& j) {
    if constexpr (std::is_same_v<T, bool>) {
      return j.is_boolean();
    } else if constexpr (std::is_same_v<T, std::string>) {
      return j.is_string();
    } else if constexpr (std::is_floating_point_v<T>) {
      return j.is_number();
    } else if constexpr (std::is_unsigned_v<T>) {
      return j.is_number_unsigned();
    } else if constexpr (std::is_integral_v<T>) {
      return j.is_number_integer();
    } else if constexpr (IsVector<T>::value) {
      if (!j.is_array()) return false;
      for (const auto& e : j) {
        if (!TypeOk<typename T::value_type>(e)) return false;
      }
      return true;
    } else {
      static_assert(sizeof(T) == 0, "unsupported field type");
    }
  }

  const Json* obj_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void ReadLm(Reader& r, memfilter::NGramConfig& c) {
  r.Sub("lm", [&](Reader& s) {
    s.Get("order", c.order);
    s.Get("smoothing", c.smoothing);
    s.Get("cache_weight", c.cache_weight);
  });
}

void ReadDedup(Reader& r, dedup::DedupAttackConfig& c) {
  r.Get("n_targets", c.n_targets);
  r.Get("n_duplicates", c.n_duplicates);
  r.Get("apply_dedup", c.apply_dedup);
  r.Sub("policy", [&](Reader& s) {
    s.GetEnum("mode", c.policy.mode, dedup::ParseDedupMode);
    s.GetEnum("deletion", c.policy.deletion, dedup::ParseDeletion);
    s.Get("alpha", c.policy.alpha);
  });
  r.Get("alpha_guess", c.alpha_guess);
  r.Get("embed_dim", c.embed_dim);
  r.Get("embedder_seed", c.embedder_seed);
  r.Get("backdoor_indices", c.backdoor_indices);
  r.Get("backdoor_values", c.backdoor_values);
  r.Get("shadow_models", c.shadow_models);
  r.Get("eval_models", c.eval_models);
  r.Get("targets_per_model", c.targets_per_model);
  r.Get("subsample_fraction", c.subsample_fraction);
  r.Sub("data", [&](Reader& s) {
    s.Get("dim", c.data.dim);
    s.Get("num_classes", c.data.num_classes);
    s.Get("pool_size", c.data.pool_size);
    s.Get("noise_std", c.data.noise_std);
    s.Get("center_lo", c.data.center_lo);
    s.Get("center_hi", c.data.center_hi);
  });
  r.Sub("train", [&](Reader& s) {
    s.Get("epochs", c.train.epochs);
    s.Get("lr", c.train.lr);
    s.Get("center_features", c.train.center_features);
    s.Get("l2", c.train.l2);
    s.Get("init_scale", c.train.init_scale);
  });
  r.Get("inversion_steps", c.inversion_steps);
}

void ReadTextAttr(Reader& r, textdedup::TextAttrConfig& c) {
  r.Get("n_candidates", c.n_candidates);
  r.Get("k", c.k);
  r.Get("trials", c.trials);
  r.Get("background_docs", c.background_docs);
  r.Get("background_doc_tokens", c.background_doc_tokens);
  r.Get("word_vocab", c.word_vocab);
  ReadLm(r, c.lm);
}

void ReadFoolsGold(Reader& r, fedsim::FoolsGoldConfig& c) {
  r.Get("n_clients", c.n_clients);
  r.Get("classes", c.classes);
  r.Get("dim", c.dim);
  r.Get("examples_per_client", c.examples_per_client);
  r.Get("majority_fraction", c.majority_fraction);
  r.Get("dirichlet_alpha", c.dirichlet_alpha);
  r.Get("attacker_examples", c.attacker_examples);
  r.Get("join_round", c.join_round);
  r.Get("window", c.window);
  r.Get("rounds", c.rounds);
  r.Get("lr", c.lr);
  r.Get("noise_std", c.noise_std);
  r.Get("center_lo", c.center_lo);
  r.Get("center_hi", c.center_hi);
  r.GetEnum("defense", c.defense, fedsim::ParseDefense);
  r.Get("pardoning", c.pardoning);
  r.Get("target_classes", c.target_classes);
  r.Get("seeds", c.seeds);
  r.Get("calibration_seeds", c.calibration_seeds);
}

fedsim::ClusterPolarity ParsePolarity(std::string_view s) {
  if (s == "remove_small") return fedsim::ClusterPolarity::kRemoveSmall;
  if (s == "remove_large") return fedsim::ClusterPolarity::kRemoveLarge;
  throw ContractViolation("unknown polarity");
}

void ReadClustering(Reader& r, fedsim::ActivationClusteringConfig& c) {
  r.Get("trials", c.trials);
  r.Get("pool_size", c.pool_size);
  r.Get("classes", c.classes);
  r.Get("dim", c.dim);
  r.Get("noise_std", c.noise_std);
  r.Get("k", c.k);
  r.Get("threshold", c.threshold);
  r.GetEnum("polarity", c.polarity, ParsePolarity);
}

void ReadVocab(Reader& r, tokenizer::VocabExtractConfig& c) {
  r.Get("n_vocabs", c.n_vocabs);
  r.Get("max_merges", c.max_merges);
  r.Get("corpus_bytes", c.corpus_bytes);
  r.Get("max_token_len", c.max_token_len);
  r.Get("window", c.window);
}

memfilter::FilterToggle ParseToggle(std::string_view s) {
  for (auto t : {memfilter::FilterToggle::kOn, memfilter::FilterToggle::kOff,
                 memfilter::FilterToggle::kPermanent}) {
    if (memfilter::FilterToggleName(t) == s) return t;
  }
  throw ContractViolation("unknown toggle");
}

void ReadMemfilterMi(Reader& r, memfilter::MemfilterMiConfig& c) {
  r.Get("n_members", c.n_members);
  r.Get("n_nonmembers", c.n_nonmembers);
  r.Get("sentence_bytes", c.sentence_bytes);
  r.Get("k", c.k);
  r.Get("fp_rate", c.fp_rate);
  r.GetEnum("toggle", c.toggle, ParseToggle);
  r.Get("bpe_merges", c.bpe_merges);
  r.Get("background_docs", c.background_docs);
  r.Get("background_doc_bytes", c.background_doc_bytes);
  r.Get("repetitions", c.repetitions);
  ReadLm(r, c.lm);
}

void ReadSecret(Reader& r, memfilter::SecretExtractConfig& c) {
  r.Get("n_secrets", c.n_secrets);
  r.Get("secret_tokens", c.secret_tokens);
  r.Get("k", c.k);
  r.Get("fp_rate", c.fp_rate);
  r.Get("bpe_merges", c.bpe_merges);
  r.Get("bpe_training_bytes", c.bpe_training_bytes);
  r.Get("background_docs", c.background_docs);
  r.Get("background_doc_bytes", c.background_doc_bytes);
  r.Get("prior_bytes", c.prior_bytes);
  r.Get("max_queries_per_secret", c.max_queries_per_secret);
  r.Get("repetitions", c.repetitions);
  ReadLm(r, c.lm);
}

void ReadDpAudit(Reader& r, dpaudit::DpAuditConfig& c) {
  r.Get("n_duplicates", c.n_duplicates);
  r.Get("apply_dedup", c.apply_dedup);
  r.Get("alpha", c.alpha);
  r.Get("embed_dim", c.embed_dim);
  r.Get("embedder_seed", c.embedder_seed);
  r.Get("feature_dim", c.feature_dim);
  r.Get("num_classes", c.num_classes);
  r.Get("background_size", c.background_size);
  r.Get("noise_std", c.noise_std);
  r.Get("center_lo", c.center_lo);
  r.Get("center_hi", c.center_hi);
  r.Sub("dp", [&](Reader& s) {
    s.Get("clip_norm", c.dp.clip_norm);
    s.Get("noise_multiplier", c.dp.noise_multiplier);
    s.Get("steps", c.dp.steps);
    s.Get("lr", c.dp.lr);
    s.Get("delta", c.dp.delta);
  });
  r.Get("eval_models", c.eval_models);
  r.Get("shadow_models", c.shadow_models);
  r.Get("confidence", c.confidence);
  r.Get("inversion_steps", c.inversion_steps);
}

void ReadQueryFilter(Reader& r, queryfilter::QueryFilterConfig& c) {
  r.Get("n_queried", c.n_queried);
  r.Get("n_heldout", c.n_heldout);
  r.Get("dim", c.dim);
  r.Get("num_classes", c.num_classes);
  r.Get("noise_std", c.noise_std);
  r.Sub("fingerprint", [&](Reader& s) {
    s.Get("levels", c.fingerprint.levels);
    s.Get("window", c.fingerprint.window);
    s.Get("salt", c.fingerprint.salt);
  });
  r.Get("threshold", c.threshold);
  r.Get("store_rejected", c.store_rejected);
  r.Get("replay_noise", c.replay_noise);
  r.Get("collision_pairs", c.collision_pairs);
}

// Departures from the reference setting, stated in every report.
std::vector<std::string> Deviations(std::string_view kind) {
  std::vector<std::string> d = {
      "desk-scale synthetic data and linear models; magnitudes are not "
      "comparable to the reference experiments"};
  if (kind == "dedup_attack") {
    d.push_back("embedder is a seeded linear projection, not a network");
    d.push_back("delete_all_but_one keeps a uniform survivor per component");
  } else if (kind == "text_attr" || kind == "memfilter_mi" ||
             kind == "secret_extract") {
    d.push_back("language model is an n-gram model with an in-context cache");
  } else if (kind == "foolsgold") {
    d.push_back("server sums multiplier-weighted updates; one full-batch step "
                "per client per round");
  } else if (kind == "activation_clustering") {
    d.push_back("representations are raw blob features");
  } else if (kind == "vocab_extract") {
    d.push_back("oracle is a simulated context window over a hidden BPE "
                "vocabulary");
  } else if (kind == "dp_audit") {
    d.push_back("full-batch DP-SGD with zCDP accounting, no subsampling");
    d.push_back("empirical epsilon is a Clopper-Pearson ratio bound");
  } else if (kind == "query_filter") {
    d.push_back("fingerprints are hashed windows of quantized feature vectors");
  }
  return d;
}

template <typename Config>
Config Parse(const Json* params, std::uint64_t seed,
             std::vector<std::string>& problems,
             void (*read)(Reader&, Config&)) {
  Config c;
  {
    Reader r(params, "params", problems);
    read(r, c);
  }
  c.seed = seed;
  if (problems.empty()) {
    try {
      c.Validate();
    } catch (const ContractViolation& e) {
      problems.push_back(std::string("params: ") + e.what());
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) problems.push_back("params: " + p);
    }
  }
  return c;
}

template <typename Config>
AttackReport Dispatch(const Json* params, std::uint64_t seed,
                      std::vector<std::string> problems,
                      void (*read)(Reader&, Config&),
                      AttackReport (*run)(const Config&)) {
  const Config c = Parse(params, seed, problems, read);
  if (!problems.empty()) throw ConfigError(problems);
  return run(c);
}

AttackReport RunDp(const dpaudit::DpAuditConfig& c) {
  return dpaudit::RunDpDedupAudit(c).report;
}

}  // namespace

std::span<const std::string_view> ScenarioKinds() { return kKinds; }

std::string ConfigHash(const Json& config) {
  Json copy = config;
  if (copy.is_object()) copy.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(copy.dump())));
  return buf;
}

ScenarioOutput RunScenario(const Json& config,
                           std::optional<std::uint64_t> seed_override) {
  std::vector<std::string> problems;
  if (!config.is_object()) throw ConfigError({"config: expected an object"});
  std::string kind;
  std::uint64_t seed = 0;
  std::string output_dir;
  const Json* params = nullptr;
  {
    Reader top(&config, "config", problems);
    top.Get("kind", kind);
    top.Get("seed", seed);
    top.Get("output_dir", output_dir);
    params = top.Raw("params");
    if (params != nullptr && !params->is_object()) {
      problems.push_back("config.params: expected an object");
      params = nullptr;
    }
  }
  if (!config.contains("kind")) problems.push_back("config.kind: missing");
  bool known = false;
  for (auto k : kKinds) known |= k == kind;
  if (config.contains("kind") && !known) {
    problems.push_back("config.kind: unknown scenario \"" + kind + "\"");
  }
  // Without a kind the params cannot be checked.
  if (!known) throw ConfigError(problems);
  if (seed_override) seed = *seed_override;

  Json effective = config;
  effective["seed"] = seed;
  AttackReport report;
  if (kind == "dedup_attack") {
    report = Dispatch(params, seed, problems, ReadDedup, dedup::RunDedupAttack);
  } else if (kind == "text_attr") {
    report = Dispatch(params, seed, problems, ReadTextAttr, textdedup::RunTextAttr);
  } else if (kind == "foolsgold") {
    report = Dispatch(params, seed, problems, ReadFoolsGold, fedsim::RunFoolsGoldAttack);
  } else if (kind == "activation_clustering") {
    report = Dispatch(params, seed, problems, ReadClustering,
                      fedsim::RunActivationClustering);
  } else if (kind == "vocab_extract") {
    report = Dispatch(params, seed, problems, ReadVocab, tokenizer::RunVocabExtract);
  } else if (kind == "memfilter_mi") {
    report = Dispatch(params, seed, problems, ReadMemfilterMi, memfilter::RunMemfilterMi);
  } else if (kind == "secret_extract") {
    report = Dispatch(params, seed, problems, ReadSecret, memfilter::RunSecretExtraction);
  } else if (kind == "dp_audit") {
    report = Dispatch(params, seed, problems, ReadDpAudit, RunDp);
  } else {
    report = Dispatch(params, seed, problems, ReadQueryFilter, queryfilter::RunQueryFilter);
  }

  ScenarioOutput out;
  out.kind = kind;
  out.report["module_version"] = kModuleVersion;
  out.report["kind"] = kind;
  out.report["config_hash"] = ConfigHash(effective);
  Json echoed = effective;
  echoed.erase("output_dir");
  out.report["config"] = std::move(echoed);
  out.report["deviations"] = Deviations(kind);
  const Json body = report.ToJson();
  for (const auto& [k, v] : body.items()) out.report[k] = v;
  if (!report.roc.points.empty()) out.roc_csv = report.RocCsv();
  return out;
}

}  // namespace sclab::cli
