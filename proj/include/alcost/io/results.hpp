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

// JSON and CSV forms of stage outputs. Nothing here records wall-clock time,
// so equal inputs serialize to equal bytes.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "alcost/core/manifest.hpp"
#include "alcost/cost_model/cost_model.hpp"
#include "alcost/metrics/metrics.hpp"
#include "alcost/selection/selection.hpp"
#include "alcost/simulation/experiments.hpp"

namespace alcost {

using Json = nlohmann::json;

// Headline APs at the top level, counts per level underneath.
inline Json to_json(const EvalMetrics& m) {
  Json j = Json::object();
  for (auto [name, r] : {std::pair{"pixel", &m.pixel}, std::pair{"region", &m.region},
                         std::pair{"frame", &m.frame}, std::pair{"stack", &m.stack}}) {
    j[std::string(name) + "_ap"] = r->ap;
    j[name] = Json{{"ap", r->ap}, {"n_pos", r->n_pos}, {"n_instances", r->n_instances}};
  }
  return j;
}

inline Json to_json(const CostModelParams& p) {
  const auto& d = p.diagnostics;
  return Json{{"alpha", p.alpha},
              {"beta", p.beta},
              {"gamma", p.gamma},
              {"floor_time", p.floor_time},
              {"fitted", p.fitted},
              {"r2", d.r2},
              {"r2_log_boundary", d.r2_log_boundary},
              {"r2_log_components", d.r2_log_components},
              {"sigma", d.sigma},
              {"residual_skewness", d.residual_skewness},
              {"std_errors", d.std_errors},
              {"condition", d.condition},
              {"n", d.n}};
}

inline CostModelParams cost_model_from_json(const Json& j) {
  CostModelParams p;
  try {
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.floor_time = j.at("floor_time").get<double>();
    p.fitted = j.value("fitted", true);
    p.diagnostics.r2 = j.value("r2", 0.0);
    p.diagnostics.sigma = j.value("sigma", 0.0);
    p.diagnostics.n = j.value("n", std::size_t{0});
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("cost model JSON: ") + e.what());
  }
  if (!(p.floor_time > 0.0)) throw ConfigError("cost model floor_time must be > 0");
  return p;
}

inline Json to_json(const SelectionResult& s, const Budget& budget) {
  return Json{{"policy", std::string(to_string(s.policy))},
              {"budget_s", budget.seconds},
              {"quantum", budget.quantum},
              {"chosen", s.chosen},
              {"count", s.chosen.size()},
              {"total_value", s.total_value},
              {"total_time", s.total_time},
              {"warnings", s.warnings}};
}

inline Json to_json(const ALRoundResult& r) {
  Json metrics = Json::object();
  for (const auto& [split, m] : r.metrics) metrics[split] = to_json(m);
  return Json{{"mode", r.mode},
              {"policy", r.policy},
              {"replicate", r.replicate},
              {"round", r.round},
              {"budget_s", r.budget_s},
              {"budget_spent_s", r.budget_spent_s},
              {"gt_charged_s", r.gt_charged_s},
              {"overrun_s", r.overrun_s},
              {"stacks_added", r.stacks_added},
              {"labeled_count", r.labeled_count},
              {"pool_remaining", r.pool_remaining},
              {"labeled_fraction", r.labeled_fraction},
              {"pool_to_labeled_ratio", r.pool_to_labeled_ratio},
              {"metrics", metrics},
              {"added_ids", r.added_ids},
              {"replicate_seed", r.replicate_seed},
              {"train_seed", r.train_seed},
              {"notes", r.notes}};
}

// One JSON document per line.
inline std::string to_jsonl(const std::vector<ALRoundResult>& results) {
  std::string out;
  for (const auto& r : results) out += to_json(r).dump() + "\n";
  return out;
}

inline std::string timing_jsonl(const std::vector<ALRoundResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += Json{{"policy", r.policy},
                {"replicate", r.replicate},
                {"round", r.round},
                {"wall_time_s", r.wall_time_s}}
               .dump() +
           "\n";
  }
  return out;
}

struct CurvePoint {
  std::string policy;
  std::size_t round = 0;
  std::string split;
  std::size_t replicates = 0;
  double labeled_count = 0.0;
  double stacks_added = 0.0;
  double gt_charged_s = 0.0;
  // Mean and sample standard deviation across replicates, per metric level.
  std::map<std::string, std::pair<double, double>> ap;
};

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd =
      v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return {mean, sd};
}

// Groups by (policy, round, split) in first-seen policy order.
inline std::vector<CurvePoint> learning_curves(
    const std::vector<ALRoundResult>& results) {
  std::vector<std::string> policy_order;
  std::map<std::tuple<std::string, std::size_t, std::string>,
           std::vector<const ALRoundResult*>>
      groups;
  for (const auto& r : results) {
    if (std::find(policy_order.begin(), policy_order.end(), r.policy) ==
        policy_order.end()) {
      policy_order.push_back(r.policy);
    }
    for (const auto& [split, m] : r.metrics) {
      groups[{r.policy, r.round, split}].push_back(&r);
    }
  }
  std::vector<CurvePoint> out;
  for (const auto& policy : policy_order) {
    for (const auto& [key, members] : groups) {
      if (std::get<0>(key) != policy) continue;
      CurvePoint p;
      p.policy = policy;
      p.round = std::get<1>(key);
      p.split = std::get<2>(key);
      p.replicates = members.size();
      std::map<std::string, std::vector<double>> levels;
      for (const ALRoundResult* r : members) {
        p.labeled_count += static_cast<double>(r->labeled_count);
        p.stacks_added += static_cast<double>(r->stacks_added);
        p.gt_charged_s += r->gt_charged_s;
        const EvalMetrics& m = r->metrics.at(p.split);
        levels["pixel"].push_back(m.pixel.ap);
        levels["region"].push_back(m.region.ap);
        levels["frame"].push_back(m.frame.ap);
        levels["stack"].push_back(m.stack.ap);
      }
      const double n = static_cast<double>(members.size());
      p.labeled_count /= n;
      p.stacks_added /= n;
      p.gt_charged_s /= n;
      for (const auto& [level, values] : levels) p.ap[level] = mean_std(values);
      out.push_back(std::move(p));
    }
  }
  return out;
}

inline std::string curves_csv(const std::vector<CurvePoint>& curves) {
  std::ostringstream os;
  os << "policy,round,split,replicates,labeled_count,stacks_added,gt_charged_s";
  for (const char* level : {"pixel", "region", "frame", "stack"}) {
    os << ',' << level << "_ap_mean," << level << "_ap_std";
  }
  os << '\n';
  using detail::format_double;
  for (const auto& p : curves) {
    os << p.policy << ',' << p.round << ',' << p.split << ',' << p.replicates
       << ',' << format_double(p.labeled_count) << ','
       << format_double(p.stacks_added) << ',' << format_double(p.gt_charged_s);
    for (const char* level : {"pixel", "region", "frame", "stack"}) {
      const auto& [mean, sd] = p.ap.at(level);
      os << ',' << format_double(mean) << ',' << format_double(sd);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace alcost
