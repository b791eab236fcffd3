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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. `acceptance 3 7` runs only criteria 3 and 7.
//
// Tolerances:
//   1  knapsack value == brute force to 1e-9; each solve < 1 s
//   2  JS in [0, log2 N + 1e-12]; identical members |JS| <= 1e-12;
//      mean-KL form agrees to 1e-9
//   3  every coefficient within 3 standard errors; noiseless fit to 1e-9;
//      low-noise batch |predicted - charged| <= 10% of charged
//   4  K = 1 equals the largest patch mean exactly; K >= #patches equals the
//      mean of all patch means to 1e-12
//   5  exact equality of boundary length and component count
//   6  10 replicates; mean stack AP of qbc >= random from 1/8 labeled on;
//      |qbc(1/2) - qbc(1)| <= 0.02
//   7  10 replicates in the first 10% round; knapsack >= ual and >= random
//      in more than half, and in mean stack AP; knapsack adds >= 2x the
//      stacks ual adds; trainval times span >= 100x
//   8  10 replicates; augmented > baseline on pool_test in >= 8; mean
//      seed_test pixel AP drop < 0.02
//   9  byte equality

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "alcost/core/random.hpp"
#include "alcost/cost_model/cost_model.hpp"
#include "alcost/io/results.hpp"
#include "alcost/io/run_config.hpp"
#include "alcost/morphology/morphology.hpp"
#include "alcost/selection/selection.hpp"
#include "alcost/uncertainty/aggregation.hpp"
#include "alcost/uncertainty/js.hpp"

namespace alcost {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// ------------------------------------------------------------------- 1

Outcome knapsack_vs_brute_force() {
  Rng rng(derive_seed(2026, "acceptance_knapsack"));
  int mismatches = 0;
  double slowest = 0.0;
  const int instances = 120;
  for (int trial = 0; trial < instances; ++trial) {
    const std::size_t n = 1 + trial % 18;
    std::vector<SelectionItem> items;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::exp(uniform(rng, 0.0, std::log(100.0)));
      const double t =
          std::round(std::exp(uniform(rng, std::log(10.0), std::log(1000.0))));
      items.push_back({"k" + std::to_string(100 + i), v, t});
      total += t;
    }
    const double budget = std::round(uniform(rng, 0.1, 0.7) * total);
    const auto start = std::chrono::steady_clock::now();
    const auto r = knapsack_select(items, {.seconds = budget, .quantum = 1.0});
    slowest = std::max(slowest, std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count());
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      double v = 0.0, t = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          v += items[i].value;
          t += items[i].time;
        }
      }
      if (t <= budget) best = std::max(best, v);
    }
    if (std::abs(r.total_value - best) > 1e-9 || r.total_time > budget) {
      ++mismatches;
    }
  }
  return {mismatches == 0 && slowest < 1.0,
          std::to_string(instances) + " instances, " +
              std::to_string(mismatches) + " mismatches, slowest " +
              fmt("%.4f s", slowest)};
}

// ------------------------------------------------------------------- 2

double kl_bits(double p, double q) {
  double d = 0.0;
  if (p > 0.0) d += p * std::log2(p / q);
  if (p < 1.0) d += (1.0 - p) * std::log2((1.0 - p) / (1.0 - q));
  return d;
}

Outcome js_properties() {
  Rng rng(derive_seed(2026, "acceptance_js"));
  int bound_fail = 0, identical_fail = 0, form_fail = 0;
  double worst_form = 0.0;
  const int committees = 10000;
  for (int k = 0; k < committees; ++k) {
    const std::size_t n = std::size_t{2} << (k % 3);
    std::vector<double> p(n);
    for (double& x : p) {
      const double u = uniform01(rng);
      // Some members sit exactly on 0 or 1.
      x = u < 0.05 ? 0.0 : u > 0.95 ? 1.0 : uniform01(rng);
    }
    const double js = js_divergence(p);
    if (!(js >= 0.0 && js <= std::log2(static_cast<double>(n)) + 1e-12)) {
      ++bound_fail;
    }
    double mean = 0.0;
    for (double x : p) mean += x;
    mean /= static_cast<double>(n);
    double kl = 0.0;
    for (double x : p) kl += kl_bits(x, mean);
    kl /= static_cast<double>(n);
    worst_form = std::max(worst_form, std::abs(js - kl));
    if (std::abs(js - kl) > 1e-9) ++form_fail;

    std::vector<double> same(n, p[0]);
    if (std::abs(js_divergence(same)) > 1e-12) ++identical_fail;
  }
  return {bound_fail + identical_fail + form_fail == 0,
          std::to_string(committees) + " committees, N in {2,4,8}: bound " +
              std::to_string(bound_fail) + ", identical " +
              std::to_string(identical_fail) + ", form " +
              std::to_string(form_fail) + " failures; max |JS - KL form| " +
              fmt("%.2e", worst_form)};
}

// ------------------------------------------------------------------- 3

std::vector<TimeSample> time_samples(std::uint64_t seed, std::size_t n,
                                     double sigma) {
  Rng rng(seed);
  std::vector<TimeSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = std::exp(uniform(rng, std::log(4.0), std::log(2000.0)));
    const double m = static_cast<double>(
        std::uniform_int_distribution<int>(1, 6)(rng));
    const double t =
        std::exp(0.8 * std::log(b) + 0.4 * std::log(m) + 2.0 + sigma * normal(rng));
    out.push_back({b, m, t});
  }
  return out;
}

Outcome cost_recovery() {
  std::string detail;
  bool pass = true;

  const auto noisy = time_samples(derive_seed(2026, "acceptance_cost"), 200, 0.3);
  const auto fit = fit_cost_model(noisy);
  const double truth[3] = {0.8, 0.4, 2.0};
  const double got[3] = {fit.alpha, fit.beta, fit.gamma};
  double worst_z = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst_z = std::max(worst_z,
                       std::abs(got[i] - truth[i]) / fit.diagnostics.std_errors[i]);
  }
  pass = pass && worst_z <= 3.0;
  detail += "noisy fit max |z| " + fmt("%.2f", worst_z);

  const auto exact = fit_cost_model(
      time_samples(derive_seed(2026, "acceptance_cost_exact"), 50, 0.0));
  const double err = std::max({std::abs(exact.alpha - 0.8),
                               std::abs(exact.beta - 0.4),
                               std::abs(exact.gamma - 2.0)});
  pass = pass && err <= 1e-9;
  detail += ", noiseless error " + fmt("%.1e", err);

  RunConfig rc;
  rc.merge_text(
      "experiment.mode = cost-sensitive\n"
      "experiment.policies = knapsack\n"
      "experiment.rounds = 1\n"
      "experiment.replicates = 3\n"
      "synthetic.time.noise_sigma = 0.05\n"
      "synthetic.noise_sigma = 0.02\n"
      "synthetic.seed_domain.faint_fraction = 0\n"
      "synthetic.pool_domain.faint_fraction = 0\n");
  const auto results =
      run_experiment(experiment_config(rc), generate_synthetic(synthetic_config(rc),
                                                               resolved_jobs(rc)));
  double worst_rel = 0.0;
  for (const auto& r : results) {
    if (r.round != 1) continue;
    worst_rel = std::max(worst_rel,
                         std::abs(r.budget_spent_s - r.gt_charged_s) / r.gt_charged_s);
  }
  pass = pass && worst_rel <= 0.10;
  detail += ", low-noise batches worst |pred - gt| / gt " + fmt("%.3f", worst_rel);
  return {pass, detail};
}

// ------------------------------------------------------------------- 4

Outcome top_k_limits() {
  Rng rng(derive_seed(2026, "acceptance_topk"));
  int fails = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    UncertaintyMap m;
    const std::size_t frames = 1 + trial % 5;
    const std::size_t h = 8 + trial % 29, w = 8 + (trial * 7) % 31;
    const std::size_t p = 4 + trial % 13;
    for (std::size_t f = 0; f < frames; ++f) {
      Frame fr(h, w);
      for (float& v : fr.values()) v = static_cast<float>(uniform01(rng));
      m.maps.push_back(std::move(fr));
    }
    // Patch means straight from the pixels.
    std::vector<double> means;
    for (const auto& fr : m.maps) {
      for (std::size_t r0 = 0; r0 < h; r0 += p) {
        for (std::size_t c0 = 0; c0 < w; c0 += p) {
          double s = 0.0;
          std::size_t cnt = 0;
          for (std::size_t r = r0; r < std::min(h, r0 + p); ++r) {
            for (std::size_t c = c0; c < std::min(w, c0 + p); ++c) {
              s += fr(r, c);
              ++cnt;
            }
          }
          means.push_back(s / static_cast<double>(cnt));
        }
      }
    }
    double mx = means[0], avg = 0.0;
    for (double x : means) {
      mx = std::max(mx, x);
      avg += x;
    }
    avg /= static_cast<double>(means.size());
    const auto patches = patch_uncertainties(m, {.top_k = 1, .patch_size = p});
    const double k1 = stack_uncertainty("s", patches, {.top_k = 1, .patch_size = p}).value;
    const double kall =
        stack_uncertainty("s", patches, {.top_k = means.size() + trial % 3, .patch_size = p})
            .value;
    if (k1 != mx || std::abs(kall - avg) > 1e-12) ++fails;
  }
  return {fails == 0, std::to_string(trials) + " random stacks, " +
                          std::to_string(fails) + " failures"};
}

// ------------------------------------------------------------------- 5

Outcome morphology_oracles() {
  Rng rng(derive_seed(2026, "acceptance_morphology"));
  int fails = 0;
  const int masks = 500;
  for (int k = 0; k < masks; ++k) {
    const double density = uniform(rng, 0.05, 0.7);
    BinaryMask m(16, 16);
    for (auto& b : m.values()) b = uniform01(rng) < density ? 1 : 0;

    // Components: depth-first flood fill over the 8-neighbourhood.
    std::vector<int> seen(256, 0);
    std::size_t comps = 0;
    for (int start = 0; start < 256; ++start) {
      if (!m(start / 16, start % 16) || seen[start]) continue;
      ++comps;
      std::vector<int> stack{start};
      seen[start] = 1;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int r = cur / 16 + dr, c = cur % 16 + dc;
            if (r < 0 || r >= 16 || c < 0 || c >= 16) continue;
            if (m(r, c) && !seen[r * 16 + c]) {
              seen[r * 16 + c] = 1;
              stack.push_back(r * 16 + c);
            }
          }
        }
      }
    }
    // Boundary: foreground/background transitions on a zero-padded grid.
    std::size_t edges = 0;
    auto at = [&](int r, int c) {
      return r >= 0 && r < 16 && c >= 0 && c < 16 && m(r, c);
    };
    for (int r = -1; r < 16; ++r) {
      for (int c = -1; c < 16; ++c) {
        edges += at(r, c) != at(r + 1, c);
        edges += at(r, c) != at(r, c + 1);
      }
    }
    if (connected_components(m).count != comps ||
        boundary_length(m) != static_cast<double>(edges)) {
      ++fails;
    }
  }
  return {fails == 0, std::to_string(masks) + " random 16x16 masks, " +
                          std::to_string(fails) + " mismatches"};
}

// --------------------------------------------------------------- 6 to 8

std::vector<ALRoundResult> simulate(const std::string& overrides) {
  RunConfig rc;
  rc.merge_text(overrides);
  return run_experiment(experiment_config(rc),
                        generate_synthetic(synthetic_config(rc), resolved_jobs(rc)));
}

const ALRoundResult* find(const std::vector<ALRoundResult>& rs,
                          const std::string& policy, std::size_t rep,
                          std::size_t round) {
  for (const auto& r : rs) {
    if (r.policy == policy && r.replicate == rep && r.round == round) return &r;
  }
  return nullptr;
}

double mean_of(const std::vector<ALRoundResult>& rs, const std::string& policy,
               std::size_t round, const std::function<double(const ALRoundResult&)>& f) {
  double s = 0.0;
  int n = 0;
  for (const auto& r : rs) {
    if (r.policy == policy && r.round == round) {
      s += f(r);
      ++n;
    }
  }
  return s / n;
}

double stack_ap(const ALRoundResult& r) { return r.metrics.at("seed_test").stack.ap; }

Outcome core_set() {
  const auto rs = simulate("experiment.mode = core-set\nexperiment.replicates = 10\n");
  bool pass = true;
  std::string detail;
  // Rounds 0..5 label 1/32 .. 1/1 of trainval.
  for (std::size_t round = 2; round <= 5; ++round) {
    const double q = mean_of(rs, "qbc", round, stack_ap);
    const double r = mean_of(rs, "random", round, stack_ap);
    pass = pass && q >= r;
    detail += "1/" + std::to_string(32 >> round) + ": qbc " + fmt("%.4f", q) +
              " random " + fmt("%.4f", r) + "; ";
  }
  const double half = mean_of(rs, "qbc", 4, stack_ap);
  const double full = mean_of(rs, "qbc", 5, stack_ap);
  pass = pass && std::abs(half - full) <= 0.02;
  detail += "qbc 1/2 vs full gap " + fmt("%.4f", std::abs(half - full));
  return {pass, detail};
}

Outcome cost_sensitive() {
  RunConfig rc;
  rc.merge_text("experiment.mode = cost-sensitive\nexperiment.replicates = 10\n");
  const auto data = generate_synthetic(synthetic_config(rc), resolved_jobs(rc));
  const auto rs = run_experiment(experiment_config(rc), data);
  double lo = 1e300, hi = 0.0;
  for (const Stack* s : data.split(Split::kSeedTrainval)) {
    lo = std::min(lo, *s->gt_label_time);
    hi = std::max(hi, *s->gt_label_time);
  }
  int beat_ual = 0, beat_random = 0;
  const std::size_t reps = 10;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const double cal = stack_ap(*find(rs, "knapsack", rep, 1));
    beat_ual += cal >= stack_ap(*find(rs, "ual", rep, 1));
    beat_random += cal >= stack_ap(*find(rs, "random", rep, 1));
  }
  auto added = [](const ALRoundResult& r) { return double(r.stacks_added); };
  const double cal_n = mean_of(rs, "knapsack", 1, added);
  const double ual_n = mean_of(rs, "ual", 1, added);
  const double cal_ap = mean_of(rs, "knapsack", 1, stack_ap);
  const bool means_ok = cal_ap >= mean_of(rs, "ual", 1, stack_ap) &&
                        cal_ap >= mean_of(rs, "random", 1, stack_ap);
  const bool span_ok = hi / lo >= 100.0;
  const bool pass = 2 * beat_ual > int(reps) && 2 * beat_random > int(reps) &&
                    means_ok && span_ok && cal_n >= 2.0 * ual_n;
  return {pass,
          "knapsack >= ual in " + std::to_string(beat_ual) + "/10, >= random in " +
              std::to_string(beat_random) + "/10; mean stack AP knapsack " +
              fmt("%.4f", mean_of(rs, "knapsack", 1, stack_ap)) + " ual " +
              fmt("%.4f", mean_of(rs, "ual", 1, stack_ap)) + " random " +
              fmt("%.4f", mean_of(rs, "random", 1, stack_ap)) +
              "; stacks added " + fmt("%.1f", cal_n) + " vs " + fmt("%.1f", ual_n) +
              "; time span " + fmt("%.0fx", hi / lo)};
}

Outcome wild() {
  const auto rs = simulate("experiment.mode = wild\nexperiment.replicates = 10\n");
  int wins = 0;
  double drop = 0.0;
  const std::size_t reps = 10;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto* base = find(rs, "baseline", rep, 0);
    const auto* aug = find(rs, "knapsack", rep, 1);
    wins += aug->metrics.at("pool_test").stack.ap > base->metrics.at("pool_test").stack.ap;
    drop += base->metrics.at("seed_test").pixel.ap - aug->metrics.at("seed_test").pixel.ap;
  }
  drop /= static_cast<double>(reps);
  auto pool_ap = [](const ALRoundResult& r) { return r.metrics.at("pool_test").stack.ap; };
  return {wins >= 8 && drop < 0.02,
          "pool_test stack AP improved in " + std::to_string(wins) +
              "/10 (baseline " + fmt("%.4f", mean_of(rs, "baseline", 0, pool_ap)) +
              ", augmented " + fmt("%.4f", mean_of(rs, "knapsack", 1, pool_ap)) +
              "); mean seed_test pixel AP drop " + fmt("%.4f", drop)};
}

// ------------------------------------------------------------------- 9

Outcome replay() {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("alcost_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  RunConfig rc;
  rc.merge_text(
      "seed = 77\n"
      "experiment.mode = cost-sensitive\n"
      "experiment.replicates = 2\n"
      "experiment.rounds = 2\n"
      "synthetic.n_trainval = 48\n"
      "synthetic.n_test = 12\n"
      "synthetic.n_pool = 8\n"
      "synthetic.n_pool_test = 8\n"
      "learner.epochs = 3\n");
  io::write_text(dir / "run_config.json", rc.to_json().dump(2) + "\n");
  auto run = [](const RunConfig& c) {
    return to_jsonl(run_experiment(
        experiment_config(c), generate_synthetic(synthetic_config(c), resolved_jobs(c))));
  };
  const std::string first = run(rc);
  RunConfig again;
  again.merge_file(dir / "run_config.json");
  const std::string second = run(again);
  const bool same_config = again.to_json().dump() == rc.to_json().dump();
  fs::remove_all(dir);
  return {same_config && first == second && !first.empty(),
          std::to_string(first.size()) + " bytes of round records, " +
              (first == second ? "identical" : "different") + "; config " +
              (same_config ? "identical" : "different")};
}

}  // namespace
}  // namespace alcost

int main(int argc, char** argv) {
  using namespace alcost;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"knapsack matches brute force", knapsack_vs_brute_force},
      {"JS bounds and closed form", js_properties},
      {"cost model recovery", cost_recovery},
      {"top-K limits", top_k_limits},
      {"boundary and components vs naive", morphology_oracles},
      {"core-set: qbc vs random", core_set},
      {"cost-sensitive first round", cost_sensitive},
      {"wild: augmented vs baseline", wild},
      {"replay from saved config", replay},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%s) [%.1f s]\n", id,
                o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
