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

// alcost: command-line driver for the cost-sensitive active learning
// pipeline.
//
//   gen          synthetic dataset            -> stacks/, manifest.csv
//   train        committee on labeled stacks  -> committee/, committee.json
//   predict      member + mean heatmaps       -> heatmaps/, predictions.csv
//   uncertainty  JS maps, stack values        -> js/, uncertainty.csv
//   features     B, M per stack; GT cost samples; selection items
//   fit-cost     log-linear time model        -> cost_model.json
//   select       budgeted batch               -> selection.json
//   eval         AP at four levels            -> eval.json
//   simulate     full AL experiment           -> rounds.jsonl, curves.csv
//
// Exit codes: 0 success, 1 stage error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "alcost/committee/checkpoint.hpp"
#include "alcost/committee/committee.hpp"
#include "alcost/core/container.hpp"
#include "alcost/core/manifest.hpp"
#include "alcost/cost_model/cost_model.hpp"
#include "alcost/io/results.hpp"
#include "alcost/io/run_config.hpp"
#include "alcost/metrics/metrics.hpp"
#include "alcost/morphology/stack_features.hpp"
#include "alcost/selection/selection.hpp"
#include "alcost/simulation/experiments.hpp"
#include "alcost/simulation/synthetic.hpp"
#include "alcost/uncertainty/aggregation.hpp"
#include "alcost/uncertainty/js.hpp"

namespace fs = std::filesystem;
using namespace alcost;

namespace {

bool g_quiet = false;

void log(const std::string& stage, const std::string& msg) {
  if (!g_quiet) std::cerr << "[alcost] " << stage << ": " << msg << "\n";
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string require(const RunConfig& rc, const std::string& key,
                    const std::string& flag) {
  std::string v = rc.string(key);
  if (v.empty()) throw UsageError(flag + " is required");
  return v;
}

void write_json(const fs::path& path, const Json& j) {
  io::write_text(path, j.dump(2) + "\n");
}

Json read_json(const fs::path& path) {
  const auto bytes = io::read_file(path);
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

void write_run_config(const fs::path& out, const std::string& stage,
                      const RunConfig& rc) {
  fs::create_directories(out);
  Json j = rc.to_json();
  write_json(out / "run_config.json", j);
  log(stage, "resolved config written to " + (out / "run_config.json").string());
}

std::vector<Stack> load_split(const DatasetManifest& m,
                              std::optional<Split> split) {
  std::vector<Stack> out;
  for (const auto& e : m.entries) {
    if (split && e.split != *split) continue;
    out.push_back(load_entry(e));
  }
  return out;
}

std::optional<Split> split_or(const RunConfig& rc, std::optional<Split> dflt) {
  const std::string s = rc.string("io.split");
  if (s.empty()) return dflt;
  if (s == "all") return std::nullopt;
  return parse_split(s);
}


// ---------------------------------------------------------------- stages

void run_gen(const RunConfig& rc, const fs::path& out) {
  const SyntheticConfig cfg = synthetic_config(rc);
  const SyntheticDataset data = generate_synthetic(cfg, resolved_jobs(rc));
  fs::create_directories(out / "stacks");
  DatasetManifest manifest;
  for (const auto& s : data.stacks) {
    const fs::path p = out / "stacks" / (s.id + ".alst");
    save_stack(s, p);
    manifest.entries.push_back(
        {.stack_id = s.id, .path = p, .split = s.split,
         .gt_label_time = s.gt_label_time, .payload = PayloadKind::kIntensity});
  }
  write_manifest(manifest, out / "manifest.csv");
  log("gen", std::to_string(data.stacks.size()) + " stacks written");
}

void run_train(const RunConfig& rc, const fs::path& out) {
  const auto manifest = read_manifest(require(rc, "io.manifest", "--manifest"));
  auto split = split_or(rc, Split::kSeedTrainval);
  std::vector<Stack> stacks = load_split(manifest, split);
  // Stacks chosen by a selection round join the training set.
  if (const std::string inc = rc.string("io.include"); !inc.empty()) {
    const Json sel = read_json(inc);
    for (const auto& id : sel.at("chosen")) {
      const ManifestEntry* e = manifest.find(id.get<std::string>());
      if (!e) throw ConfigError("selected stack '" + id.get<std::string>() +
                                "' is not in the manifest");
      if (split && e->split == *split) continue;
      stacks.push_back(load_entry(*e));
    }
  }
  std::sort(stacks.begin(), stacks.end(),
            [](const Stack& a, const Stack& b) { return a.id < b.id; });
  if (stacks.empty()) throw ConfigError("no stacks to train on");

  CommitteeOptions opts;
  opts.n_members = rc.unsigned_int("committee.size");
  opts.seeds = member_seeds(rc.stage_seed("train"), opts.n_members);
  opts.bootstrap = rc.boolean("committee.bootstrap");
  opts.hyper = learner_hyperparams(rc);
  opts.jobs = resolved_jobs(rc);
  const Committee committee = train_committee(stacks, opts);
  for (const auto& w : committee.warnings) log("train", "warning: " + w);

  fs::create_directories(out / "committee");
  Json members = Json::array();
  for (std::size_t i = 0; i < committee.size(); ++i) {
    const std::string name = "member_" + std::to_string(i) + ".alpr";
    save_checkpoint(committee.members[i], out / "committee" / name);
    members.push_back("committee/" + name);
  }
  std::vector<std::string> ids;
  for (const auto& s : stacks) ids.push_back(s.id);
  write_json(out / "committee.json",
             Json{{"feature_basis", std::string(kFeatureBasisId)},
                  {"members", members},
                  {"member_seeds", opts.seeds},
                  {"trained_on", ids},
                  {"warnings", committee.warnings}});
  log("train", std::to_string(committee.size()) + " members on " +
                   std::to_string(stacks.size()) + " stacks");
}

Committee load_committee(const fs::path& dir) {
  const fs::path meta_path =
      fs::is_directory(dir) ? dir / "committee.json" : dir;
  const Json meta = read_json(meta_path);
  Committee c;
  for (const auto& m : meta.at("members")) {
    c.members.push_back(
        load_checkpoint(meta_path.parent_path() / m.get<std::string>()));
  }
  if (c.members.size() < 2) throw ConfigError("committee needs >= 2 members");
  return c;
}

void run_predict(const RunConfig& rc, const fs::path& out) {
  const Committee committee =
      load_committee(require(rc, "io.committee", "--committee"));
  const auto manifest = read_manifest(require(rc, "io.manifest", "--manifest"));
  const auto split = split_or(rc, Split::kSeedTest);
  const std::size_t patch = rc.unsigned_int("inference.patch_size");
  const std::size_t stride = rc.unsigned_int("inference.stride");

  std::vector<const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) {
    if (!split || e.split == *split) entries.push_back(&e);
  }
  fs::create_directories(out / "heatmaps");
  DatasetManifest means;
  std::vector<std::vector<std::string>> member_rows(entries.size());
  means.entries.resize(entries.size());
  parallel_for(entries.size(), resolved_jobs(rc), [&](std::size_t i) {
    const Stack stack = load_entry(*entries[i]);
    const auto maps = committee_heatmaps(committee, stack, patch, stride);
    const fs::path dir = out / "heatmaps" / stack.id;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const fs::path p = dir / ("member_" + std::to_string(k) + ".alst");
      save_heatmap(maps[k], p);
      member_rows[i].push_back(stack.id + "," + std::to_string(k) + ",heatmaps/" +
                               stack.id + "/member_" + std::to_string(k) +
                               ".alst");
    }
    save_heatmap(mean_heatmap(maps), dir / "mean.alst");
    means.entries[i] = {.stack_id = stack.id,
                        .path = dir / "mean.alst",
                        .split = stack.split,
                        .gt_label_time = std::nullopt,
                        .payload = PayloadKind::kProbability};
  });
  write_manifest(means, out / "predictions.csv");
  std::string members = "stack_id,member,path\n";
  for (const auto& rows : member_rows) {
    for (const auto& r : rows) members += r + "\n";
  }
  io::write_text(out / "members.csv", members);
  log("predict", std::to_string(entries.size()) + " stacks");
}

// Member heatmaps grouped by stack id, from a predict output directory.
std::map<std::string, std::vector<fs::path>> read_members(const fs::path& dir) {
  const auto rows = read_csv(dir / "members.csv", {"stack_id", "member", "path"});
  std::map<std::string, std::vector<fs::path>> out;
  for (const auto& r : rows) out[r[0]].push_back(dir / r[2]);
  return out;
}

void run_uncertainty(const RunConfig& rc, const fs::path& out) {
  const fs::path pred = require(rc, "io.predictions", "--predictions");
  const auto members = read_members(pred);
  std::vector<std::pair<std::string, std::vector<fs::path>>> work(
      members.begin(), members.end());
  std::vector<UncertaintyMap> maps(work.size());
  parallel_for(work.size(), resolved_jobs(rc), [&](std::size_t i) {
    std::vector<HeatmapStack> hs;
    for (const auto& p : work[i].second) {
      HeatmapStack h = load_heatmap(p);
      h.stack_id = work[i].first;
      hs.push_back(std::move(h));
    }
    maps[i] = uncertainty_map(hs);
  });
  if (maps.empty()) throw ConfigError("no member heatmaps found");
  const Frame& f0 = maps.front().maps.front();
  double frames = 0.0;
  for (const auto& m : maps) frames += static_cast<double>(m.maps.size());
  const ScoringConfig sc = scoring_config(rc, f0.height(), f0.width(),
                                          frames / static_cast<double>(maps.size()));

  fs::create_directories(out / "js");
  DatasetManifest js_manifest;
  std::string csv = "stack_id,value\n";
  for (const auto& m : maps) {
    const fs::path p = out / "js" / (m.stack_id + ".alst");
    save_heatmap(HeatmapStack{.stack_id = m.stack_id, .maps = m.maps}, p);
    js_manifest.entries.push_back({.stack_id = m.stack_id,
                                   .path = p,
                                   .split = Split::kPool,
                                   .gt_label_time = std::nullopt,
                                   .payload = PayloadKind::kJsBits});
    const auto su = stack_uncertainty(
        m.stack_id, patch_uncertainties(m, sc.aggregation), sc.aggregation);
    csv += m.stack_id + "," + detail::format_double(su.value) + "\n";
  }
  write_manifest(js_manifest, out / "js_manifest.csv");
  io::write_text(out / "uncertainty.csv", csv);
  log("uncertainty", std::to_string(maps.size()) + " stacks, top_k " +
                         std::to_string(sc.aggregation.top_k));
}

std::map<std::string, double> read_keyed_column(const fs::path& path,
                                                const std::string& column) {
  const auto rows = read_csv(path, {"stack_id", column});
  std::map<std::string, double> out;
  for (const auto& r : rows) out[r[0]] = detail::parse_double(r[1], column);
  return out;
}

void run_features(const RunConfig& rc, const fs::path& out) {
  fs::create_directories(out);
  bool did_something = false;
  const ThresholdSet thresholds(rc.numbers("thresholds"));

  // Ground-truth cost samples of labeled stacks.
  if (const std::string gt = rc.string("io.gt"); !gt.empty()) {
    const auto manifest = read_manifest(gt);
    const auto split = split_or(rc, Split::kSeedTrainval);
    std::string csv = "stack_id,B,M,t_seconds\n";
    std::size_t n = 0;
    for (const auto& e : manifest.entries) {
      if (split && e.split != *split) continue;
      if (!e.gt_label_time) continue;
      const Stack s = load_entry(e);
      if (!s.gt_masks) continue;
      const auto t = mask_totals(*s.gt_masks);
      csv += s.id + "," + detail::format_double(t.boundary) + "," +
             detail::format_double(t.components) + "," +
             detail::format_double(*s.gt_label_time) + "\n";
      ++n;
    }
    io::write_text(out / "cost_samples.csv", csv);
    log("features", std::to_string(n) + " ground-truth cost samples");
    did_something = true;
  }

  // Predicted-mask features of scored stacks.
  if (const std::string pred = rc.string("io.predictions"); !pred.empty()) {
    const auto manifest = read_manifest(fs::path(pred) / "predictions.csv");
    std::vector<StackFeatures> feats(manifest.entries.size());
    parallel_for(manifest.entries.size(), resolved_jobs(rc), [&](std::size_t i) {
      HeatmapStack h = load_heatmap(manifest.entries[i].path);
      h.stack_id = manifest.entries[i].stack_id;
      feats[i] = stack_features(h, thresholds);
    });
    std::string csv = "stack_id,B,M";
    for (double tau : thresholds.values()) {
      csv += ",B_" + detail::format_double(tau) + ",M_" + detail::format_double(tau);
    }
    csv += "\n";
    for (const auto& f : feats) {
      csv += f.stack_id + "," + detail::format_double(f.boundary) + "," +
             detail::format_double(f.components);
      for (const auto& t : f.per_threshold) {
        csv += "," + detail::format_double(t.boundary) + "," +
               detail::format_double(t.components);
      }
      csv += "\n";
    }
    io::write_text(out / "features.csv", csv);
    log("features", std::to_string(feats.size()) + " stacks featurized");

    // Selection items: V from uncertainty.csv, T from the cost model.
    const std::string cm = rc.string("io.cost_model");
    const std::string unc = rc.string("io.uncertainty");
    if (!cm.empty() && !unc.empty()) {
      const CostModelParams cost = cost_model_from_json(read_json(cm));
      const auto values = read_keyed_column(unc, "value");
      std::string items = "stack_id,value,time_s\n";
      for (const auto& f : feats) {
        auto it = values.find(f.stack_id);
        if (it == values.end()) {
          throw ConfigError("no uncertainty for stack '" + f.stack_id + "'");
        }
        items += f.stack_id + "," + detail::format_double(it->second) + "," +
                 detail::format_double(predict_time(cost, f)) + "\n";
      }
      io::write_text(out / "items.csv", items);
      log("features", "selection items written");
    } else if (!cm.empty() || !unc.empty()) {
      throw UsageError("--cost-model and --uncertainty go together");
    }
    did_something = true;
  }
  if (!did_something) throw UsageError("features needs --gt or --predictions");
}

void run_fit_cost(const RunConfig& rc, const fs::path& out) {
  const auto rows = read_csv(require(rc, "io.samples", "--samples"),
                             {"stack_id", "B", "M", "t_seconds"});
  std::vector<TimeSample> samples;
  double log_floor = 0.0;
  std::size_t negatives = 0;
  for (const auto& r : rows) {
    TimeSample s{detail::parse_double(r[1], "boundary"),
                 detail::parse_double(r[2], "components"),
                 detail::parse_double(r[3], "seconds")};
    if (s.boundary > 0.0) {
      samples.push_back(s);
    } else {
      log_floor += std::log(s.seconds);
      ++negatives;
    }
  }
  // Stacks without foreground set the floor time.
  const double floor = negatives > 0
                           ? std::exp(log_floor / static_cast<double>(negatives))
                           : rc.number("cost.floor_time");
  const CostModelParams params = fit_cost_model(samples, floor);
  fs::create_directories(out);
  write_json(out / "cost_model.json", to_json(params));
  io::write_text(out / "cost_diagnostics.csv",
                 to_csv(diagnostics_report(params, samples)));
  log("fit-cost", "n=" + std::to_string(samples.size()) +
                      " r2=" + detail::format_double(params.diagnostics.r2));
}

void run_select(const RunConfig& rc, const fs::path& out) {
  const auto rows = read_csv(require(rc, "io.items", "--items"),
                             {"stack_id", "value", "time_s"});
  std::vector<SelectionItem> items;
  double total = 0.0;
  for (const auto& r : rows) {
    items.push_back({r[0], detail::parse_double(r[1], "value"),
                     detail::parse_double(r[2], "time_s")});
    total += items.back().time;
  }
  double seconds = rc.number("selection.budget_s");
  if (seconds < 0.0) seconds = rc.number("selection.budget_fraction") * total;
  const Budget budget = budget_config(rc, seconds);
  const Policy policy = parse_policy(rc.string("selection.policy"));
  const SelectionResult sel =
      select_batch(items, budget, policy, rc.stage_seed("select"));
  for (const auto& w : sel.warnings) log("select", "warning: " + w);
  fs::create_directories(out);
  write_json(out / "selection.json", to_json(sel, budget));
  log("select", std::to_string(sel.chosen.size()) + " of " +
                    std::to_string(items.size()) + " stacks chosen");
}

void run_eval(const RunConfig& rc, const fs::path& out) {
  fs::path pred = require(rc, "io.predictions", "--predictions");
  if (fs::is_directory(pred)) pred /= "predictions.csv";
  const auto predictions = read_manifest(pred);
  const auto gt = read_manifest(require(rc, "io.manifest", "--manifest"));
  std::vector<HeatmapStack> maps(predictions.entries.size());
  std::vector<std::vector<BinaryMask>> masks(predictions.entries.size());
  parallel_for(predictions.entries.size(), resolved_jobs(rc), [&](std::size_t i) {
    const auto& e = predictions.entries[i];
    maps[i] = load_heatmap(e.path);
    maps[i].stack_id = e.stack_id;
    const ManifestEntry* g = gt.find(e.stack_id);
    if (!g) throw ConfigError("no ground truth for '" + e.stack_id + "'");
    Stack s = load_entry(*g);
    if (!s.gt_masks) throw ConfigError("'" + e.stack_id + "' has no masks");
    masks[i] = std::move(*s.gt_masks);
  });
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < maps.size(); ++i) pairs.push_back({&maps[i], &masks[i]});
  const EvalMetrics m = evaluate_all(pairs, eval_config(rc));
  fs::create_directories(out);
  write_json(out / "eval.json",
             Json{{"stacks", pairs.size()}, {"metrics", to_json(m)}});
  log("eval", "stack AP " + detail::format_double(m.stack.ap) + ", pixel AP " +
                  detail::format_double(m.pixel.ap));
}

void run_simulate(const RunConfig& rc, const fs::path& out) {
  const SyntheticConfig syn = synthetic_config(rc);
  const ExperimentConfig cfg = experiment_config(rc);
  log("simulate", "generating dataset");
  const SyntheticDataset data = generate_synthetic(syn, cfg.jobs);
  log("simulate", std::string("running ") + std::string(to_string(cfg.mode)) +
                      " with " + std::to_string(cfg.replicates) + " replicates");
  const auto results = run_experiment(cfg, data);
  fs::create_directories(out);
  io::write_text(out / "rounds.jsonl", to_jsonl(results));
  io::write_text(out / "curves.csv", curves_csv(learning_curves(results)));
  io::write_text(out / "timing.jsonl", timing_jsonl(results));
  for (const auto& r : results) {
    for (const auto& n : r.notes) {
      log("simulate", r.policy + " round " + std::to_string(r.round) + ": " + n);
    }
  }
  log("simulate", std::to_string(results.size()) + " round records");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-sensitive active learning for volumetric segmentation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "config file (key = value or JSON)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.add_flag("--quiet", g_quiet, "no progress logs");
  app.add_option("--set", sets, "override a config key: key=value")
      ->take_all();

  // Stage flags map onto config keys; unset flags leave the config alone.
  std::map<std::string, std::string> flag_values;
  auto key_flag = [&](CLI::App* sub, const std::string& flag,
                      const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&flag_values, key](const std::string& v) { flag_values[key] = v; },
        help);
  };

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  auto* train = app.add_subcommand("train", "train the committee");
  key_flag(train, "--manifest", "io.manifest", "dataset manifest");
  key_flag(train, "--split", "io.split", "split to train on (default seed_trainval)");
  key_flag(train, "--include", "io.include", "selection.json whose stacks join training");
  auto* predict = app.add_subcommand("predict", "committee heatmaps");
  key_flag(predict, "--committee", "io.committee", "train output directory");
  key_flag(predict, "--manifest", "io.manifest", "dataset manifest");
  key_flag(predict, "--split", "io.split", "split to predict (default seed_test; all)");
  auto* unc = app.add_subcommand("uncertainty", "JS maps and stack values");
  key_flag(unc, "--predictions", "io.predictions", "predict output directory");
  auto* feat = app.add_subcommand("features", "morphology features and items");
  key_flag(feat, "--predictions", "io.predictions", "predict output directory");
  key_flag(feat, "--gt", "io.gt", "manifest for ground-truth cost samples");
  key_flag(feat, "--split", "io.split", "split of --gt (default seed_trainval)");
  key_flag(feat, "--cost-model", "io.cost_model", "cost_model.json");
  key_flag(feat, "--uncertainty", "io.uncertainty", "uncertainty.csv");
  auto* fit = app.add_subcommand("fit-cost", "fit the labeling-time model");
  key_flag(fit, "--samples", "io.samples", "cost_samples.csv");
  auto* sel = app.add_subcommand("select", "choose a batch under a budget");
  key_flag(sel, "--items", "io.items", "items.csv");
  key_flag(sel, "--policy", "selection.policy", "knapsack | ual | random | greedy");
  key_flag(sel, "--budget-s", "selection.budget_s", "budget in seconds");
  key_flag(sel, "--quantum-s", "selection.quantum", "DP time step in seconds");
  auto* ev = app.add_subcommand("eval", "average precision");
  key_flag(ev, "--predictions", "io.predictions", "predict output or predictions.csv");
  key_flag(ev, "--manifest", "io.manifest", "ground-truth manifest");
  auto* sim = app.add_subcommand("simulate", "run an active learning experiment");
  key_flag(sim, "--mode", "experiment.mode", "core-set | cost-sensitive | wild");
  key_flag(sim, "--replicates", "experiment.replicates", "replicate seeds");
  key_flag(sim, "--rounds", "experiment.rounds", "selection rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* stage = app.get_subcommands().front();
  const std::string name = stage->get_name();
  RunConfig rc;
  try {
    if (!config_path.empty()) rc.merge_file(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value");
      rc.set_text(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flag_values) rc.set_text(k, v);
    if (seed) rc.set("seed", *seed);
    if (jobs) rc.set("jobs", *jobs);
  } catch (const UsageError& e) {
    std::cerr << "alcost: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "alcost: " << e.what() << "\n";
    return 2;
  } catch (const alcost::Error& e) {
    std::cerr << "alcost: " << e.what() << "\n";
    return 1;
  }

  const fs::path out(out_dir);
  try {
    write_run_config(out, name, rc);
    if (stage == gen) run_gen(rc, out);
    else if (stage == train) run_train(rc, out);
    else if (stage == predict) run_predict(rc, out);
    else if (stage == unc) run_uncertainty(rc, out);
    else if (stage == feat) run_features(rc, out);
    else if (stage == fit) run_fit_cost(rc, out);
    else if (stage == sel) run_select(rc, out);
    else if (stage == ev) run_eval(rc, out);
    else if (stage == sim) run_simulate(rc, out);
  } catch (const UsageError& e) {
    std::cerr << "alcost " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "alcost " << name << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
