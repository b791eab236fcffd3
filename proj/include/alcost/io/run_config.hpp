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

// Flat run configuration shared by every pipeline stage.
//
// Keys are dotted names ("learner.epochs", "synthetic.pool_domain.size_scale")
// with JSON values. A config file is either a JSON object (nested objects are
// flattened with '.') or lines of `key = value`, where '#' starts a comment
// and the value is read as JSON when it parses and as a string otherwise.
// Unknown keys and values of the wrong type are errors.
//
// Precedence: built-in defaults < config file < command-line flags.
//
// Seeds. Everything random derives from the single `seed` key:
//   dataset          derive_seed(seed, "gen")
//   train (CLI)      derive_seed(seed, "train")
//   eval pixel draw  derive_seed(seed, "eval")
//   select random    derive_seed(seed, "select")
//   simulate         derive_seed(seed, "simulate")

#pragma once

#include <cctype>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alcost/core/binary_io.hpp"
#include "alcost/core/error.hpp"
#include "alcost/core/random.hpp"
#include "alcost/simulation/experiments.hpp"
#include "alcost/simulation/synthetic.hpp"

namespace alcost {

using Json = nlohmann::json;

class RunConfig {
 public:
  RunConfig() : values_(defaults()) {}

  static const std::map<std::string, Json>& defaults() {
    static const std::map<std::string, Json> table = build_defaults();
    return table;
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  const Json& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' is not a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError("config key '" + key +
                        "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::int64_t integer(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) {
      throw ConfigError("config key '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
  }

  bool boolean(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' is not a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError("config key '" + key + "' is not a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw ConfigError("config key '" + key + "' is not a list");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) {
        throw ConfigError("config key '" + key + "' must list numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key) const {
    const Json& v = at(key);
    if (v.is_string()) return split_list(v.get<std::string>());
    if (!v.is_array()) throw ConfigError("config key '" + key + "' is not a list");
    std::vector<std::string> out;
    for (const auto& x : v) {
      if (!x.is_string()) {
        throw ConfigError("config key '" + key + "' must list strings");
      }
      out.push_back(x.get<std::string>());
    }
    return out;
  }

  // Type-checked against the default: integers stay integers, numbers accept
  // integers, lists accept a comma-separated string.
  void set(const std::string& key, Json value) {
    auto it = defaults().find(key);
    if (it == defaults().end()) throw ConfigError("unknown config key '" + key + "'");
    const Json& proto = it->second;
    if (proto.is_array() && value.is_string()) {
      const auto parts = split_list(value.get<std::string>());
      Json list = Json::array();
      for (const auto& p : parts) {
        list.push_back(proto.empty() || proto.front().is_string()
                           ? Json(p)
                           : parse_scalar(p));
      }
      value = std::move(list);
    }
    const bool ok =
        (proto.is_number_integer() && value.is_number_integer()) ||
        (proto.is_number_float() && value.is_number()) ||
        (proto.is_boolean() && value.is_boolean()) ||
        (proto.is_string() && value.is_string()) ||
        (proto.is_array() && value.is_array());
    if (!ok) {
      throw ConfigError("config key '" + key + "' expects " +
                        std::string(proto.type_name()) + ", got " +
                        std::string(value.type_name()));
    }
    if (proto.is_number_float()) value = value.get<double>();
    values_[key] = std::move(value);
  }

  // `text` as it would appear on the right of '=' or after a flag.
  void set_text(const std::string& key, std::string_view text) {
    auto it = defaults().find(key);
    if (it != defaults().end() && it->second.is_string()) {
      // Strings stay verbatim unless written as a JSON string literal.
      const Json parsed = parse_scalar(text);
      set(key, parsed.is_string() ? parsed : Json(std::string(text)));
      return;
    }
    set(key, parse_scalar(text));
  }

  void merge_text(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') {
      Json doc;
      try {
        doc = Json::parse(text);
      } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
      }
      merge_json(doc, "");
      return;
    }
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": expected key = value");
      }
      set_text(std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
    }
  }

  void merge_file(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    merge_text(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                bytes.size()));
  }

  // Flat object with keys in sorted order.
  Json to_json() const {
    Json out = Json::object();
    for (const auto& [k, v] : values_) out[k] = v;
    return out;
  }

  std::uint64_t seed() const { return unsigned_int("seed"); }
  std::uint64_t stage_seed(std::string_view stage) const {
    return derive_seed(seed(), stage);
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  }

  static std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find(',', pos), text.size());
      const auto part = trim(text.substr(pos, end - pos));
      if (!part.empty()) out.emplace_back(part);
      pos = end + 1;
    }
    return out;
  }

  static Json parse_scalar(std::string_view text) {
    const Json parsed = Json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) return Json(std::string(text));
    return parsed;
  }

  void merge_json(const Json& node, const std::string& prefix) {
    if (!node.is_object()) throw ConfigError("config JSON must be an object");
    for (const auto& [k, v] : node.items()) {
      const std::string key = prefix.empty() ? k : prefix + "." + k;
      if (v.is_object()) {
        merge_json(v, key);
      } else {
        set(key, v);
      }
    }
  }

  static std::map<std::string, Json> build_defaults() {
    const SyntheticConfig syn;
    const LearnerHyperparams hyper;
    const ExperimentConfig exp;
    std::map<std::string, Json> d;
    d["seed"] = 1;
    d["jobs"] = 0;  // 0: all available cores

    d["synthetic.height"] = syn.height;
    d["synthetic.width"] = syn.width;
    d["synthetic.frames_min"] = syn.frames_min;
    d["synthetic.frames_max"] = syn.frames_max;
    d["synthetic.n_trainval"] = syn.n_trainval;
    d["synthetic.n_test"] = syn.n_test;
    d["synthetic.n_pool"] = syn.n_pool;
    d["synthetic.n_pool_test"] = syn.n_pool_test;
    d["synthetic.positive_fraction"] = syn.positive_fraction;
    d["synthetic.max_lesions"] = syn.max_lesions;
    d["synthetic.extra_lesion_prob"] = syn.extra_lesion_prob;
    d["synthetic.radius_min"] = syn.radius_min;
    d["synthetic.radius_max"] = syn.radius_max;
    d["synthetic.lesion_intensity_min"] = syn.lesion_intensity_min;
    d["synthetic.lesion_intensity_max"] = syn.lesion_intensity_max;
    d["synthetic.faint_intensity_min"] = syn.faint_intensity_min;
    d["synthetic.faint_intensity_max"] = syn.faint_intensity_max;
    d["synthetic.tissue_intensity"] = syn.tissue_intensity;
    d["synthetic.skull_intensity"] = syn.skull_intensity;
    d["synthetic.noise_sigma"] = syn.noise_sigma;
    d["synthetic.mimic_rate"] = syn.mimic_rate;
    d["synthetic.mimic_intensity_min"] = syn.mimic_intensity_min;
    d["synthetic.mimic_intensity_max"] = syn.mimic_intensity_max;
    d["synthetic.time.alpha"] = syn.time.alpha;
    d["synthetic.time.beta"] = syn.time.beta;
    d["synthetic.time.gamma"] = syn.time.gamma;
    d["synthetic.time.noise_sigma"] = syn.time.noise_sigma;
    d["synthetic.time.floor_time"] = syn.time.floor_time;
    for (auto [name, dom] : {std::pair{"seed_domain", &syn.seed_domain},
                             std::pair{"pool_domain", &syn.pool_domain}}) {
      const std::string p = std::string("synthetic.") + name + ".";
      d[p + "intensity_offset"] = dom->intensity_offset;
      d[p + "noise_scale"] = dom->noise_scale;
      d[p + "size_scale"] = dom->size_scale;
      d[p + "faint_fraction"] = dom->faint_fraction;
    }

    d["learner.learning_rate"] = hyper.learning_rate;
    d["learner.epochs"] = hyper.epochs;
    d["learner.l2"] = hyper.l2;
    d["learner.init_scale"] = hyper.init_scale;
    d["learner.pixels_per_patch"] = hyper.pixels_per_patch;
    d["learner.lesion_focus"] = hyper.lesion_focus;

    d["committee.size"] = exp.committee_size;
    d["committee.bootstrap"] = exp.bootstrap;

    d["inference.patch_size"] = exp.scoring.patch_size;
    d["inference.stride"] = exp.scoring.stride;

    d["aggregation.top_k"] = 0;  // 0: scaled default for the frame geometry
    d["aggregation.patch_size"] = exp.scoring.aggregation.patch_size;
    d["thresholds"] = exp.scoring.thresholds.values();

    d["cost.floor_time"] = exp.floor_time;
    d["cost.features"] = "predicted";

    d["selection.policy"] = "knapsack";
    d["selection.budget_s"] = -1.0;  // < 0: budget_fraction of the pool time
    d["selection.budget_fraction"] = exp.budget_fraction;
    d["selection.quantum"] = exp.quantum;
    d["selection.max_cells"] = Budget{}.max_cells;

    d["eval.reduction"] = "max";
    d["eval.reduction_k"] = 1;
    d["eval.pixel_negative_keep"] = 1.0;
    d["eval.region_threshold"] = RegionMatchConfig{}.threshold;
    d["eval.region_min_iou"] = RegionMatchConfig{}.min_iou;

    d["experiment.mode"] = "core-set";
    d["experiment.policies"] = Json::array();  // empty: the mode's default arms
    d["experiment.seed_fraction"] = -1.0;      // < 0: the mode's default
    d["experiment.rounds"] = 0;                // 0: the mode's default
    d["experiment.replicates"] = exp.replicates;

    // Stage inputs, recorded so a run directory's config can replay the run.
    for (const char* k : {"io.manifest", "io.committee", "io.predictions",
                          "io.gt", "io.samples", "io.cost_model",
                          "io.uncertainty", "io.items", "io.include",
                          "io.split"}) {
      d[k] = "";
    }
    return d;
  }

  std::map<std::string, Json> values_;
};

inline SyntheticConfig synthetic_config(const RunConfig& rc) {
  SyntheticConfig c;
  c.height = rc.unsigned_int("synthetic.height");
  c.width = rc.unsigned_int("synthetic.width");
  c.frames_min = rc.unsigned_int("synthetic.frames_min");
  c.frames_max = rc.unsigned_int("synthetic.frames_max");
  c.n_trainval = rc.unsigned_int("synthetic.n_trainval");
  c.n_test = rc.unsigned_int("synthetic.n_test");
  c.n_pool = rc.unsigned_int("synthetic.n_pool");
  c.n_pool_test = rc.unsigned_int("synthetic.n_pool_test");
  c.positive_fraction = rc.number("synthetic.positive_fraction");
  c.max_lesions = rc.unsigned_int("synthetic.max_lesions");
  c.extra_lesion_prob = rc.number("synthetic.extra_lesion_prob");
  c.radius_min = rc.number("synthetic.radius_min");
  c.radius_max = rc.number("synthetic.radius_max");
  c.lesion_intensity_min = rc.number("synthetic.lesion_intensity_min");
  c.lesion_intensity_max = rc.number("synthetic.lesion_intensity_max");
  c.faint_intensity_min = rc.number("synthetic.faint_intensity_min");
  c.faint_intensity_max = rc.number("synthetic.faint_intensity_max");
  c.tissue_intensity = rc.number("synthetic.tissue_intensity");
  c.skull_intensity = rc.number("synthetic.skull_intensity");
  c.noise_sigma = rc.number("synthetic.noise_sigma");
  c.mimic_rate = rc.number("synthetic.mimic_rate");
  c.mimic_intensity_min = rc.number("synthetic.mimic_intensity_min");
  c.mimic_intensity_max = rc.number("synthetic.mimic_intensity_max");
  c.time.alpha = rc.number("synthetic.time.alpha");
  c.time.beta = rc.number("synthetic.time.beta");
  c.time.gamma = rc.number("synthetic.time.gamma");
  c.time.noise_sigma = rc.number("synthetic.time.noise_sigma");
  c.time.floor_time = rc.number("synthetic.time.floor_time");
  for (auto [name, dom] : {std::pair{"seed_domain", &c.seed_domain},
                           std::pair{"pool_domain", &c.pool_domain}}) {
    const std::string p = std::string("synthetic.") + name + ".";
    dom->intensity_offset = rc.number(p + "intensity_offset");
    dom->noise_scale = rc.number(p + "noise_scale");
    dom->size_scale = rc.number(p + "size_scale");
    dom->faint_fraction = rc.number(p + "faint_fraction");
  }
  c.seed = rc.stage_seed("gen");
  return c;
}

inline int resolved_jobs(const RunConfig& rc) {
  const auto j = rc.integer("jobs");
  if (j < 0) throw ConfigError("jobs must be >= 0");
  return j == 0 ? default_jobs() : static_cast<int>(j);
}

inline LearnerHyperparams learner_hyperparams(const RunConfig& rc) {
  LearnerHyperparams h;
  h.learning_rate = rc.number("learner.learning_rate");
  h.epochs = static_cast<std::uint32_t>(rc.unsigned_int("learner.epochs"));
  h.l2 = rc.number("learner.l2");
  h.init_scale = rc.number("learner.init_scale");
  h.pixels_per_patch =
      static_cast<std::uint32_t>(rc.unsigned_int("learner.pixels_per_patch"));
  h.lesion_focus = rc.number("learner.lesion_focus");
  h.patch_size =
      static_cast<std::uint32_t>(rc.unsigned_int("inference.patch_size"));
  if (!(h.learning_rate > 0.0) || h.epochs == 0 || h.l2 < 0.0 ||
      h.init_scale < 0.0 || h.pixels_per_patch == 0 ||
      !(h.lesion_focus >= 0.0 && h.lesion_focus <= 1.0)) {
    throw ConfigError("invalid learner hyperparameters");
  }
  return h;
}

// `mean_frames` sizes the automatic top-K; pass the dataset's mean.
inline ScoringConfig scoring_config(const RunConfig& rc, std::size_t height,
                                    std::size_t width, double mean_frames) {
  ScoringConfig s;
  s.patch_size = rc.unsigned_int("inference.patch_size");
  s.stride = rc.unsigned_int("inference.stride");
  s.aggregation.patch_size = rc.unsigned_int("aggregation.patch_size");
  if (s.aggregation.patch_size == 0) {
    throw ConfigError("aggregation.patch_size must be positive");
  }
  const auto k = rc.unsigned_int("aggregation.top_k");
  s.aggregation.top_k =
      k > 0 ? k
            : default_top_k(height, width, s.aggregation.patch_size, mean_frames);
  s.thresholds = ThresholdSet(rc.numbers("thresholds"));
  return s;
}

inline EvalConfig eval_config(const RunConfig& rc) {
  EvalConfig e;
  e.pixel.negative_keep = rc.number("eval.pixel_negative_keep");
  if (!(e.pixel.negative_keep > 0.0 && e.pixel.negative_keep <= 1.0)) {
    throw ConfigError("eval.pixel_negative_keep must lie in (0,1]");
  }
  e.pixel.seed = rc.stage_seed("eval");
  e.region.threshold = rc.number("eval.region_threshold");
  e.region.min_iou = rc.number("eval.region_min_iou");
  const std::string red = rc.string("eval.reduction");
  if (red == "max") {
    e.reduction.kind = ScoreReduction::Kind::kMax;
  } else if (red == "topk") {
    e.reduction.kind = ScoreReduction::Kind::kTopKMean;
  } else {
    throw ConfigError("eval.reduction must be max or topk");
  }
  e.reduction.k = rc.unsigned_int("eval.reduction_k");
  return e;
}

inline Budget budget_config(const RunConfig& rc, double seconds) {
  Budget b;
  b.seconds = seconds;
  b.quantum = rc.number("selection.quantum");
  b.max_cells = rc.unsigned_int("selection.max_cells");
  return b;
}

inline ExperimentConfig experiment_config(const RunConfig& rc) {
  ExperimentConfig e;
  e.mode = parse_mode(rc.string("experiment.mode"));
  const auto policies = rc.strings("experiment.policies");
  e.policies = policies.empty() ? default_policies(e.mode) : policies;
  const double frac = rc.number("experiment.seed_fraction");
  e.seed_fraction = frac >= 0.0 ? frac : default_seed_fraction(e.mode);
  const auto rounds = rc.unsigned_int("experiment.rounds");
  e.rounds = rounds > 0 ? rounds : default_rounds(e.mode);
  e.replicates = rc.unsigned_int("experiment.replicates");
  if (e.replicates == 0) throw ConfigError("experiment.replicates must be >= 1");
  e.budget_fraction = rc.number("selection.budget_fraction");
  if (!(e.budget_fraction > 0.0 && e.budget_fraction <= 1.0)) {
    throw ConfigError("selection.budget_fraction must lie in (0,1]");
  }
  e.budget_seconds = rc.number("selection.budget_s");
  e.quantum = rc.number("selection.quantum");
  e.max_cells = rc.unsigned_int("selection.max_cells");
  e.committee_size = rc.unsigned_int("committee.size");
  e.bootstrap = rc.boolean("committee.bootstrap");
  e.seed = rc.stage_seed("simulate");
  e.learner = learner_hyperparams(rc);
  const std::string src = rc.string("cost.features");
  if (src == "gt") {
    e.cost_features = CostFeatureSource::kGroundTruth;
  } else if (src == "predicted") {
    e.cost_features = CostFeatureSource::kPredicted;
  } else {
    throw ConfigError("cost.features must be gt or predicted");
  }
  e.floor_time = rc.number("cost.floor_time");
  e.eval = eval_config(rc);
  e.jobs = resolved_jobs(rc);
  const SyntheticConfig syn = synthetic_config(rc);
  e.scoring = scoring_config(
      rc, syn.height, syn.width,
      0.5 * static_cast<double>(syn.frames_min + syn.frames_max));
  return e;
}

}  // namespace alcost
