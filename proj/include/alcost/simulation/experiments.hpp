// Copyright 2026 The alcost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Active-learning experiments on synthetic data.
//
//   core_set        Start from a random fraction of the trainval split and
//                   double the labeled set each round, either with the most
//                   uncertain stacks (qbc) or uniformly at random. Evaluates
//                   on seed_test after every round.
//   cost_sensitive  Start from a random fraction of trainval; the rest is a
//                   hidden pool. Each round spends budget_fraction of the
//                   pool's total labeling time, selecting with the knapsack
//                   (cal), uncertainty-only (ual) or random policy.
//   wild            Train on all of trainval, run one knapsack round against
//                   the (possibly domain-shifted) pool split and compare the
//                   baseline and augmented ensembles on seed_test and
//                   pool_test.
//
// Seeds. Replicate r uses rep = derive(seed, "replicate", r). The committee
// trained after round k uses member_seeds(derive(rep, "train", k)) in every
// arm, so arms that end up with the same labeled set train identical models.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "alcost/committee/committee.hpp"
#include "alcost/core/parallel.hpp"
#include "alcost/core/random.hpp"
#include "alcost/cost_model/cost_model.hpp"
#include "alcost/metrics/metrics.hpp"
#include "alcost/morphology/stack_features.hpp"
#include "alcost/selection/selection.hpp"
#include "alcost/simulation/oracle.hpp"
#include "alcost/simulation/synthetic.hpp"
#include "alcost/uncertainty/aggregation.hpp"
#include "alcost/uncertainty/js.hpp"

namespace alcost {

enum class ExperimentMode { kCoreSet, kCostSensitive, kWild };

inline std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kCoreSet:
      return "core-set";
    case ExperimentMode::kCostSensitive:
      return "cost-sensitive";
    case ExperimentMode::kWild:
      return "wild";
  }
  return "core-set";
}

inline ExperimentMode parse_mode(std::string_view text) {
  if (text == "core-set" || text == "core_set") return ExperimentMode::kCoreSet;
  if (text == "cost-sensitive" || text == "cost_sensitive") {
    return ExperimentMode::kCostSensitive;
  }
  if (text == "wild") return ExperimentMode::kWild;
  throw ConfigError("unknown experiment mode '" + std::string(text) + "'");
}

// Where the cost model's training features come from: the ground-truth
// masks of labeled stacks, or the committee's own thresholded predictions on
// them (the same kind of features it is later applied to).
enum class CostFeatureSource { kGroundTruth, kPredicted };

struct ScoringConfig {
  std::size_t patch_size = 32;
  std::size_t stride = 16;
  AggregationConfig aggregation;
  ThresholdSet thresholds;
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kCoreSet;
  // Fraction of trainval labeled at the start (core_set, cost_sensitive).
  double seed_fraction = 1.0 / 32.0;
  std::size_t rounds = 5;
  // Per-round budget as a fraction of the pool's total labeling time.
  double budget_fraction = 0.10;
  // Absolute per-round budget in seconds; overrides budget_fraction if >= 0.
  double budget_seconds = -1.0;
  double quantum = 1.0;
  std::uint64_t max_cells = Budget{}.max_cells;
  std::size_t committee_size = kDefaultCommitteeSize;
  bool bootstrap = false;
  // Arms. core_set: qbc, random, entropy. cost_sensitive: knapsack, ual,
  // random, greedy. wild: one of those (default knapsack).
  std::vector<std::string> policies = {"qbc", "random"};
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  ScoringConfig scoring;
  LearnerHyperparams learner;
  CostFeatureSource cost_features = CostFeatureSource::kPredicted;
  // Used when no labeled negative stack has an observed time.
  double floor_time = kDefaultFloorTime;
  EvalConfig eval;
  int jobs = 1;
};

inline std::vector<std::string> default_policies(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kCoreSet:
      return {"qbc", "random"};
    case ExperimentMode::kCostSensitive:
      return {"knapsack", "ual", "random"};
    case ExperimentMode::kWild:
      return {"knapsack"};
  }
  return {};
}

inline double default_seed_fraction(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kCoreSet:
      return 1.0 / 32.0;
    case ExperimentMode::kCostSensitive:
      return 0.5;
    case ExperimentMode::kWild:
      return 1.0;
  }
  return 1.0;
}

inline std::size_t default_rounds(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kCoreSet:
      return 5;
    case ExperimentMode::kCostSensitive:
      return 3;
    case ExperimentMode::kWild:
      return 1;
  }
  return 1;
}

inline void validate(const ExperimentConfig& cfg) {
  if (!(cfg.seed_fraction > 0.0 && cfg.seed_fraction <= 1.0)) {
    throw ConfigError("seed fraction must lie in (0,1]");
  }
  if (cfg.rounds == 0) throw ConfigError("rounds must be >= 1");
  if (cfg.replicates == 0) throw ConfigError("replicates must be >= 1");
  if (cfg.committee_size < 2) {
    throw ConfigError("committee needs at least 2 members");
  }
  if (cfg.policies.empty()) throw ConfigError("no policies to compare");
}

struct ALRoundResult {
  std::string mode;
  std::string policy;
  std::size_t replicate = 0;
  std::size_t round = 0;
  // Budget of this round (0 where selection is not budgeted).
  double budget_s = 0.0;
  // Predicted seconds of the selected batch; never exceeds budget_s.
  double budget_spent_s = 0.0;
  // Ground-truth seconds charged for the batch, and the part above budget.
  double gt_charged_s = 0.0;
  double overrun_s = 0.0;
  std::size_t stacks_added = 0;
  std::size_t labeled_count = 0;
  std::size_t pool_remaining = 0;
  double labeled_fraction = 0.0;
  double pool_to_labeled_ratio = 0.0;
  // Evaluation per test split name ("seed_test", "pool_test").
  std::map<std::string, EvalMetrics> metrics;
  std::vector<std::string> added_ids;
  std::uint64_t replicate_seed = 0;
  std::uint64_t train_seed = 0;
  std::vector<std::string> notes;
  // Not part of the deterministic record.
  double wall_time_s = 0.0;
};

// Per-stack quantities the selection policies consume.
struct StackScore {
  std::string stack_id;
  double uncertainty = 0.0;  // V, committee JS
  double entropy = 0.0;      // single-model baseline
  StackFeatures features;    // from the committee mean heatmap
};

inline StackScore score_stack(const Committee& committee, std::string_view id,
                              std::span<const Frame> frames,
                              const ScoringConfig& cfg) {
  const auto maps =
      committee_heatmaps(committee, id, frames, cfg.patch_size, cfg.stride);
  StackScore out;
  out.stack_id = std::string(id);
  const auto js = uncertainty_map(maps);
  out.uncertainty =
      top_k_mean(patch_uncertainties(js, cfg.aggregation), cfg.aggregation.top_k);
  const auto ent = entropy_map(maps.front());
  out.entropy =
      top_k_mean(patch_uncertainties(ent, cfg.aggregation), cfg.aggregation.top_k);
  out.features = stack_features(mean_heatmap(maps), cfg.thresholds);
  return out;
}

inline std::vector<StackScore> score_pool(const Committee& committee,
                                          std::span<const UnlabeledStack> pool,
                                          const ScoringConfig& cfg, int jobs) {
  std::vector<StackScore> out(pool.size());
  parallel_for(pool.size(), jobs, [&](std::size_t i) {
    out[i] = score_stack(committee, pool[i].id, pool[i].frames, cfg);
  });
  return out;
}

inline HeatmapStack committee_mean_heatmap(const Committee& committee,
                                           const Stack& stack,
                                           const ScoringConfig& cfg) {
  return mean_heatmap(
      committee_heatmaps(committee, stack, cfg.patch_size, cfg.stride));
}

inline EvalMetrics evaluate_committee(const Committee& committee,
                                      std::span<const Stack* const> test,
                                      const ScoringConfig& scoring,
                                      const EvalConfig& eval, int jobs) {
  std::vector<HeatmapStack> preds(test.size());
  parallel_for(test.size(), jobs, [&](std::size_t i) {
    preds[i] = committee_mean_heatmap(committee, *test[i], scoring);
  });
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < test.size(); ++i) {
    pairs.push_back({&preds[i], &*test[i]->gt_masks});
  }
  return evaluate_all(pairs, eval);
}

namespace detail {

inline std::vector<const Stack*> sorted_by_id(std::vector<const Stack*> v) {
  std::sort(v.begin(), v.end(),
            [](const Stack* a, const Stack* b) { return a->id < b->id; });
  return v;
}

inline Committee train_round(std::span<const Stack* const> labeled,
                             const ExperimentConfig& cfg,
                             std::uint64_t train_seed) {
  CommitteeOptions opts;
  opts.n_members = cfg.committee_size;
  opts.seeds = member_seeds(train_seed, cfg.committee_size);
  opts.bootstrap = cfg.bootstrap;
  opts.hyper = cfg.learner;
  opts.hyper.patch_size = static_cast<std::uint32_t>(cfg.scoring.patch_size);
  opts.jobs = cfg.jobs;
  return train_committee(labeled, opts);
}

inline std::vector<const Stack*> draw_seed_set(
    const std::vector<const Stack*>& trainval, double fraction,
    std::uint64_t rep_seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("seed fraction must lie in (0,1]");
  }
  std::vector<const Stack*> shuffled = trainval;
  Rng rng(derive_seed(rep_seed, "seed_set"));
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t n = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::llround(fraction * static_cast<double>(trainval.size()))));
  shuffled.resize(std::min(n, shuffled.size()));
  return sorted_by_id(std::move(shuffled));
}

inline double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Cost model fitted on the labeled stacks: positives supply (B, M, t)
// samples, negatives set the floor time (geometric mean of their times).
// Fits the time model on the labeled stacks. With predicted features, both
// the regression and the floor live in the space the pool is scored in: a
// labeled stack whose predicted mask is empty contributes to the floor even
// when it has lesions. An early committee may find too few masks to fit; the
// fit then falls back to ground-truth masks and says so in `notes`.
inline CostModelParams fit_on_labeled(std::span<const Stack* const> labeled,
                                      const Committee* committee,
                                      const ExperimentConfig& cfg,
                                      std::vector<std::string>* notes = nullptr) {
  std::vector<TimeSample> samples;
  double log_floor = 0.0;
  std::size_t empties = 0;
  const bool predicted =
      cfg.cost_features == CostFeatureSource::kPredicted && committee;
  for (const Stack* s : labeled) {
    if (!s->gt_label_time) continue;
    MaskTotals f = mask_totals(*s->gt_masks);
    if (predicted) {
      const auto sf = stack_features(
          committee_mean_heatmap(*committee, *s, cfg.scoring),
          cfg.scoring.thresholds);
      f = {sf.boundary, sf.components};
    }
    if (f.boundary <= 0.0) {
      log_floor += std::log(*s->gt_label_time);
      ++empties;
      continue;
    }
    samples.push_back({f.boundary, f.components, *s->gt_label_time});
  }
  const double floor = empties > 0
                           ? std::exp(log_floor / static_cast<double>(empties))
                           : cfg.floor_time;
  if (!predicted) return fit_cost_model(samples, floor);
  try {
    return fit_cost_model(samples, floor);
  } catch (const FitError& e) {
    if (notes) {
      notes->push_back(std::string("cost model on predicted masks failed (") +
                       e.what() + "); fitted on ground-truth masks");
    }
    return fit_on_labeled(labeled, nullptr, cfg);
  }
}

inline std::vector<SelectionItem> make_items(
    const std::vector<StackScore>& scores, const CostModelParams& cost) {
  std::vector<SelectionItem> items;
  items.reserve(scores.size());
  for (const auto& s : scores) {
    items.push_back({s.stack_id, s.uncertainty, predict_time(cost, s.features)});
  }
  return items;
}

}  // namespace detail

// Learning curves of the doubling protocol; one record per (replicate, arm,
// round). Round 0 (the shared seed set) is recorded once per arm.
inline std::vector<ALRoundResult> run_core_set(const ExperimentConfig& cfg,
                                               const SyntheticDataset& data) {
  validate(cfg);
  const auto trainval = detail::sorted_by_id(data.split(Split::kSeedTrainval));
  const auto test = data.split(Split::kSeedTest);
  if (trainval.empty() || test.empty()) {
    throw ConfigError("core-set needs seed_trainval and seed_test stacks");
  }
  for (const auto& p : cfg.policies) {
    if (p != "qbc" && p != "random" && p != "entropy") {
      throw ConfigError("core-set arm must be qbc, random or entropy, not '" +
                        p + "'");
    }
  }
  const double n_total = static_cast<double>(trainval.size());
  std::vector<ALRoundResult> results;
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, "replicate", rep);
    const auto seed_set = detail::draw_seed_set(trainval, cfg.seed_fraction,
                                                rep_seed);
    auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed0 = derive_seed(rep_seed, "train", 0);
    const Committee committee0 = detail::train_round(seed_set, cfg, seed0);
    const EvalMetrics metrics0 =
        evaluate_committee(committee0, test, cfg.scoring, cfg.eval, cfg.jobs);
    const double wall0 = detail::elapsed_s(start);

    for (const std::string& arm : cfg.policies) {
      ALRoundResult r0;
      r0.mode = "core-set";
      r0.policy = arm;
      r0.replicate = rep;
      r0.round = 0;
      r0.labeled_count = seed_set.size();
      r0.pool_remaining = trainval.size() - seed_set.size();
      r0.labeled_fraction = static_cast<double>(seed_set.size()) / n_total;
      r0.pool_to_labeled_ratio =
          static_cast<double>(r0.pool_remaining) / seed_set.size();
      r0.metrics["seed_test"] = metrics0;
      r0.replicate_seed = rep_seed;
      r0.train_seed = seed0;
      r0.stacks_added = seed_set.size();
      r0.wall_time_s = wall0;
      for (const auto& w : committee0.warnings) r0.notes.push_back(w);
      results.push_back(r0);

      std::vector<const Stack*> labeled = seed_set;
      Committee committee = committee0;
      for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        start = std::chrono::steady_clock::now();
        std::set<std::string> in_labeled;
        for (const Stack* s : labeled) in_labeled.insert(s->id);
        std::vector<const Stack*> pool;
        for (const Stack* s : trainval) {
          if (!in_labeled.contains(s->id)) pool.push_back(s);
        }
        if (pool.empty()) {
          results.back().notes.push_back(
              "pool exhausted after round " + std::to_string(round - 1) +
              "; remaining rounds truncated");
          break;
        }
        const std::size_t k = std::min(labeled.size(), pool.size());
        std::vector<const Stack*> picks;
        if (arm == "random") {
          picks = pool;
          Rng rng(derive_seed(rep_seed, "random_arm", round));
          std::shuffle(picks.begin(), picks.end(), rng);
          picks.resize(k);
        } else {
          std::vector<UnlabeledStack> view;
          for (const Stack* s : pool) {
            view.push_back({s->id, std::span<const Frame>(s->frames)});
          }
          const auto scores = score_pool(committee, view, cfg.scoring, cfg.jobs);
          std::vector<std::size_t> order(pool.size());
          std::iota(order.begin(), order.end(), 0);
          const bool qbc = arm == "qbc";
          std::stable_sort(order.begin(), order.end(),
                           [&](std::size_t a, std::size_t b) {
                             return qbc ? scores[a].uncertainty >
                                              scores[b].uncertainty
                                        : scores[a].entropy > scores[b].entropy;
                           });
          for (std::size_t i = 0; i < k; ++i) picks.push_back(pool[order[i]]);
        }
        ALRoundResult r;
        r.mode = "core-set";
        r.policy = arm;
        r.replicate = rep;
        r.round = round;
        r.stacks_added = picks.size();
        for (const Stack* s : picks) r.added_ids.push_back(s->id);
        std::sort(r.added_ids.begin(), r.added_ids.end());
        labeled.insert(labeled.end(), picks.begin(), picks.end());
        labeled = detail::sorted_by_id(std::move(labeled));
        r.train_seed = derive_seed(rep_seed, "train", round);
        committee = detail::train_round(labeled, cfg, r.train_seed);
        r.metrics["seed_test"] =
            evaluate_committee(committee, test, cfg.scoring, cfg.eval, cfg.jobs);
        r.labeled_count = labeled.size();
        r.pool_remaining = trainval.size() - labeled.size();
        r.labeled_fraction = static_cast<double>(labeled.size()) / n_total;
        r.pool_to_labeled_ratio =
            static_cast<double>(r.pool_remaining) / labeled.size();
        r.replicate_seed = rep_seed;
        for (const auto& w : committee.warnings) r.notes.push_back(w);
        r.wall_time_s = detail::elapsed_s(start);
        results.push_back(std::move(r));
      }
    }
  }
  return results;
}

namespace detail {

// One budgeted selection round against the oracle's pool. Fills the budget
// and selection fields of `r` and returns the revealed stacks.
inline std::vector<const Stack*> budgeted_round(
    const Committee& committee, std::span<const Stack* const> labeled,
    LabelOracle& oracle, Policy policy, double budget_s,
    std::uint64_t select_seed, const ExperimentConfig& cfg, ALRoundResult& r) {
  const auto pool = oracle.unlabeled();
  r.budget_s = budget_s;
  if (pool.empty()) {
    r.notes.push_back("pool exhausted");
    return {};
  }
  const CostModelParams cost =
      fit_on_labeled(labeled, &committee, cfg, &r.notes);
  const auto scores = score_pool(committee, pool, cfg.scoring, cfg.jobs);
  const auto items = make_items(scores, cost);
  Budget budget{
      .seconds = budget_s, .quantum = cfg.quantum, .max_cells = cfg.max_cells};
  const SelectionResult sel = select_batch(items, budget, policy, select_seed);
  for (const auto& w : sel.warnings) r.notes.push_back(w);
  std::vector<const Stack*> revealed;
  double charged = 0.0;
  for (const auto& id : sel.chosen) {
    const Stack& s = oracle.reveal(id);
    charged += *s.gt_label_time;
    revealed.push_back(&s);
  }
  r.budget_spent_s = sel.total_time;
  r.gt_charged_s = charged;
  r.overrun_s = std::max(0.0, charged - budget_s);
  if (r.overrun_s > 0.0) {
    r.notes.push_back("ground-truth time exceeded the round budget by " +
                      std::to_string(r.overrun_s) + " s");
  }
  r.stacks_added = revealed.size();
  r.added_ids = sel.chosen;
  r.pool_remaining = oracle.remaining();
  return revealed;
}

}  // namespace detail

// Budgeted rounds from a seed fraction of trainval; the remaining trainval
// stacks form the hidden pool. Round 0 is the shared seed-set committee.
inline std::vector<ALRoundResult> run_cost_sensitive(
    const ExperimentConfig& cfg, const SyntheticDataset& data) {
  validate(cfg);
  const auto trainval = detail::sorted_by_id(data.split(Split::kSeedTrainval));
  const auto test = data.split(Split::kSeedTest);
  if (trainval.empty() || test.empty()) {
    throw ConfigError("cost-sensitive needs seed_trainval and seed_test stacks");
  }
  std::vector<Policy> arms;
  for (const auto& p : cfg.policies) arms.push_back(parse_policy(p));

  std::vector<ALRoundResult> results;
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, "replicate", rep);
    const auto seed_set =
        detail::draw_seed_set(trainval, cfg.seed_fraction, rep_seed);
    std::set<std::string> seed_ids;
    for (const Stack* s : seed_set) seed_ids.insert(s->id);
    std::vector<const Stack*> pool_stacks;
    for (const Stack* s : trainval) {
      if (!seed_ids.contains(s->id)) pool_stacks.push_back(s);
    }

    auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed0 = derive_seed(rep_seed, "train", 0);
    const Committee committee0 = detail::train_round(seed_set, cfg, seed0);
    const EvalMetrics metrics0 =
        evaluate_committee(committee0, test, cfg.scoring, cfg.eval, cfg.jobs);
    const double wall0 = detail::elapsed_s(start);

    for (Policy policy : arms) {
      LabelOracle oracle(pool_stacks);
      const double budget_s = cfg.budget_seconds >= 0.0
                                  ? cfg.budget_seconds
                                  : cfg.budget_fraction * oracle.total_time();
      ALRoundResult r0;
      r0.mode = "cost-sensitive";
      r0.policy = std::string(to_string(policy));
      r0.replicate = rep;
      r0.labeled_count = seed_set.size();
      r0.stacks_added = seed_set.size();
      r0.pool_remaining = pool_stacks.size();
      r0.labeled_fraction =
          static_cast<double>(seed_set.size()) / trainval.size();
      r0.pool_to_labeled_ratio =
          static_cast<double>(pool_stacks.size()) / seed_set.size();
      r0.metrics["seed_test"] = metrics0;
      r0.replicate_seed = rep_seed;
      r0.train_seed = seed0;
      r0.wall_time_s = wall0;
      results.push_back(r0);

      std::vector<const Stack*> labeled = seed_set;
      Committee committee = committee0;
      for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        start = std::chrono::steady_clock::now();
        ALRoundResult r;
        r.mode = "cost-sensitive";
        r.policy = std::string(to_string(policy));
        r.replicate = rep;
        r.round = round;
        r.replicate_seed = rep_seed;
        const auto added = detail::budgeted_round(
            committee, labeled, oracle, policy, budget_s,
            derive_seed(rep_seed, "select", round), cfg, r);
        labeled.insert(labeled.end(), added.begin(), added.end());
        labeled = detail::sorted_by_id(std::move(labeled));
        r.train_seed = derive_seed(rep_seed, "train", round);
        committee = detail::train_round(labeled, cfg, r.train_seed);
        r.metrics["seed_test"] =
            evaluate_committee(committee, test, cfg.scoring, cfg.eval, cfg.jobs);
        r.labeled_count = labeled.size();
        r.labeled_fraction = static_cast<double>(labeled.size()) / trainval.size();
        r.pool_to_labeled_ratio =
            static_cast<double>(r.pool_remaining) / labeled.size();
        r.wall_time_s = detail::elapsed_s(start);
        results.push_back(std::move(r));
      }
    }
  }
  return results;
}

// Baseline (round 0) and augmented (round 1) ensembles per replicate, each
// evaluated on seed_test and pool_test.
inline std::vector<ALRoundResult> run_wild(const ExperimentConfig& cfg,
                                           const SyntheticDataset& data) {
  validate(cfg);
  const auto trainval = detail::sorted_by_id(data.split(Split::kSeedTrainval));
  const auto pool = detail::sorted_by_id(data.split(Split::kPool));
  const auto seed_test = data.split(Split::kSeedTest);
  const auto pool_test = data.split(Split::kPoolTest);
  if (trainval.empty() || pool.empty() || seed_test.empty() ||
      pool_test.empty()) {
    throw ConfigError("wild needs seed_trainval, seed_test, pool and pool_test");
  }
  const Policy policy =
      parse_policy(cfg.policies.empty() ? "knapsack" : cfg.policies.front());

  std::vector<ALRoundResult> results;
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, "replicate", rep);
    const std::uint64_t train_seed = derive_seed(rep_seed, "train", 0);
    auto start = std::chrono::steady_clock::now();
    const Committee baseline = detail::train_round(trainval, cfg, train_seed);

    ALRoundResult r0;
    r0.mode = "wild";
    r0.policy = "baseline";
    r0.replicate = rep;
    r0.labeled_count = trainval.size();
    r0.pool_remaining = pool.size();
    r0.labeled_fraction = 1.0;
    r0.pool_to_labeled_ratio = static_cast<double>(pool.size()) / trainval.size();
    r0.replicate_seed = rep_seed;
    r0.train_seed = train_seed;
    r0.metrics["seed_test"] =
        evaluate_committee(baseline, seed_test, cfg.scoring, cfg.eval, cfg.jobs);
    r0.metrics["pool_test"] =
        evaluate_committee(baseline, pool_test, cfg.scoring, cfg.eval, cfg.jobs);
    r0.wall_time_s = detail::elapsed_s(start);

    start = std::chrono::steady_clock::now();
    LabelOracle oracle(pool);
    const double budget_s = cfg.budget_seconds >= 0.0
                                ? cfg.budget_seconds
                                : cfg.budget_fraction * oracle.total_time();
    ALRoundResult r1;
    r1.mode = "wild";
    r1.policy = std::string(to_string(policy));
    r1.replicate = rep;
    r1.round = 1;
    r1.replicate_seed = rep_seed;
    r1.train_seed = train_seed;
    const auto added =
        detail::budgeted_round(baseline, trainval, oracle, policy, budget_s,
                               derive_seed(rep_seed, "select", 1), cfg, r1);
    std::vector<const Stack*> augmented = trainval;
    augmented.insert(augmented.end(), added.begin(), added.end());
    augmented = detail::sorted_by_id(std::move(augmented));
    const Committee aug =
        added.empty() ? baseline : detail::train_round(augmented, cfg, train_seed);
    r1.labeled_count = augmented.size();
    r1.labeled_fraction =
        static_cast<double>(augmented.size()) / trainval.size();
    r1.pool_to_labeled_ratio =
        static_cast<double>(r1.pool_remaining) / augmented.size();
    r1.metrics["seed_test"] =
        evaluate_committee(aug, seed_test, cfg.scoring, cfg.eval, cfg.jobs);
    r1.metrics["pool_test"] =
        evaluate_committee(aug, pool_test, cfg.scoring, cfg.eval, cfg.jobs);
    r1.wall_time_s = detail::elapsed_s(start);
    results.push_back(std::move(r0));
    results.push_back(std::move(r1));
  }
  return results;
}

inline std::vector<ALRoundResult> run_experiment(const ExperimentConfig& cfg,
                                                 const SyntheticDataset& data) {
  switch (cfg.mode) {
    case ExperimentMode::kCoreSet:
      return run_core_set(cfg, data);
    case ExperimentMode::kCostSensitive:
      return run_cost_sensitive(cfg, data);
    case ExperimentMode::kWild:
      return run_wild(cfg, data);
  }
  return {};
}

}  // namespace alcost
