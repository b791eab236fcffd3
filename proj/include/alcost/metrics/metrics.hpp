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

// Average precision at pixel, region, frame and stack granularity.
//
// AP = (1 / P) * sum over positives of the precision at that positive's rank,
// ranking by descending score with ties kept in input order. P counts every
// positive instance, including positives that never appear in the ranking
// (ground-truth regions no prediction matched).

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "alcost/committee/scores.hpp"
#include "alcost/core/error.hpp"
#include "alcost/core/random.hpp"
#include "alcost/core/types.hpp"
#include "alcost/morphology/morphology.hpp"

namespace alcost {

struct ScoredInstance {
  double score = 0.0;
  bool label = false;
};

struct ApResult {
  double ap = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_instances = 0;
};

// extra_positives are positives absent from `instances` (never retrieved).
inline ApResult average_precision_detail(std::span<const ScoredInstance> instances,
                                         std::size_t extra_positives = 0) {
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instances[a].score > instances[b].score;
  });
  std::size_t positives = extra_positives;
  for (const auto& inst : instances) positives += inst.label;
  if (positives == 0) throw MetricError("average precision needs a positive");
  double total = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (!instances[order[rank]].label) continue;
    ++hits;
    total += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return {total / static_cast<double>(positives), positives, instances.size()};
}

inline double average_precision(std::span<const ScoredInstance> instances) {
  return average_precision_detail(instances).ap;
}

// A prediction heatmap paired with the ground-truth masks of the same stack.
struct EvalPair {
  const HeatmapStack* pred = nullptr;
  const std::vector<BinaryMask>* gt = nullptr;
};

struct PixelApConfig {
  // Fraction of background pixels kept (seeded Bernoulli); 1 keeps all.
  double negative_keep = 1.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_pair(const EvalPair& p) {
  if (!p.pred || !p.gt) throw ConfigError("evaluation pair is incomplete");
  if (p.pred->maps.size() != p.gt->size()) {
    throw ConfigError("prediction and ground truth of '" + p.pred->stack_id +
                      "' differ in frame count");
  }
  for (std::size_t f = 0; f < p.gt->size(); ++f) {
    if (!p.pred->maps[f].same_shape((*p.gt)[f])) {
      throw ConfigError("prediction and ground truth of '" +
                        p.pred->stack_id + "' differ in frame dimensions");
    }
  }
}

inline bool any_foreground(const BinaryMask& m) {
  for (std::uint8_t b : m.values()) {
    if (b) return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<ScoredInstance> pixel_instances(
    std::span<const EvalPair> pairs, const PixelApConfig& cfg = {}) {
  Rng rng(derive_seed(cfg.seed, "pixel_ap"));
  std::vector<ScoredInstance> out;
  for (const auto& p : pairs) {
    detail::check_pair(p);
    for (std::size_t f = 0; f < p.gt->size(); ++f) {
      auto scores = p.pred->maps[f].values();
      auto labels = (*p.gt)[f].values();
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool label = labels[i] != 0;
        if (!label && cfg.negative_keep < 1.0 &&
            uniform01(rng) >= cfg.negative_keep) {
          continue;
        }
        out.push_back({scores[i], label});
      }
    }
  }
  return out;
}

inline ApResult pixel_ap(std::span<const EvalPair> pairs,
                         const PixelApConfig& cfg = {}) {
  const auto inst = pixel_instances(pairs, cfg);
  return average_precision_detail(inst);
}

// Frame label = any positive pixel; frame score from frame_and_stack_scores.
inline std::vector<ScoredInstance> frame_instances(
    std::span<const EvalPair> pairs, const ScoreReduction& reduction = {}) {
  std::vector<ScoredInstance> out;
  for (const auto& p : pairs) {
    detail::check_pair(p);
    const auto scores = frame_and_stack_scores(*p.pred, reduction);
    for (std::size_t f = 0; f < p.gt->size(); ++f) {
      out.push_back({scores.frame[f], detail::any_foreground((*p.gt)[f])});
    }
  }
  return out;
}

inline std::vector<ScoredInstance> stack_instances(
    std::span<const EvalPair> pairs, const ScoreReduction& reduction = {}) {
  std::vector<ScoredInstance> out;
  for (const auto& p : pairs) {
    detail::check_pair(p);
    const auto scores = frame_and_stack_scores(*p.pred, reduction);
    bool label = false;
    for (const auto& m : *p.gt) label = label || detail::any_foreground(m);
    out.push_back({scores.stack, label});
  }
  return out;
}

inline ApResult frame_ap(std::span<const EvalPair> pairs,
                         const ScoreReduction& reduction = {}) {
  const auto inst = frame_instances(pairs, reduction);
  return average_precision_detail(inst);
}

inline ApResult stack_ap(std::span<const EvalPair> pairs,
                         const ScoreReduction& reduction = {}) {
  const auto inst = stack_instances(pairs, reduction);
  return average_precision_detail(inst);
}

struct RegionMatchConfig {
  // Predicted regions are the 8-connected components of pred >= threshold.
  double threshold = 0.5;
  double min_iou = 0.5;
};

// Scored predicted regions of one frame, matched against its ground-truth
// components. Appends to `out` and returns the number of GT regions.
inline std::size_t match_frame_regions(const Frame& pred, const BinaryMask& gt,
                                       const RegionMatchConfig& cfg,
                                       std::vector<ScoredInstance>& out) {
  const auto pred_cc = connected_components(threshold(pred, cfg.threshold));
  const auto gt_cc = connected_components(gt);
  const std::size_t np = pred_cc.count;
  const std::size_t ng = gt_cc.count;
  std::vector<double> score(np + 1, 0.0);
  std::vector<std::size_t> pred_area(np + 1, 0), gt_area(ng + 1, 0);
  // Intersections as a dense (np+1) x (ng+1) table; frames are small.
  std::vector<std::size_t> inter((np + 1) * (ng + 1), 0);
  auto pv = pred.values();
  auto pl = pred_cc.labels.values();
  auto gl = gt_cc.labels.values();
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const std::uint32_t a = pl[i];
    const std::uint32_t b = gl[i];
    if (a) {
      ++pred_area[a];
      score[a] = std::max(score[a], static_cast<double>(pv[i]));
    }
    if (b) ++gt_area[b];
    if (a && b) ++inter[a * (ng + 1) + b];
  }
  std::vector<std::size_t> order(np);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[a] > score[b];
  });
  std::vector<bool> taken(ng + 1, false);
  for (std::size_t a : order) {
    double best_iou = 0.0;
    std::size_t best = 0;
    for (std::size_t b = 1; b <= ng; ++b) {
      if (taken[b] || inter[a * (ng + 1) + b] == 0) continue;
      const double i = static_cast<double>(inter[a * (ng + 1) + b]);
      const double iou =
          i / (static_cast<double>(pred_area[a] + gt_area[b]) - i);
      if (iou > best_iou) {
        best_iou = iou;
        best = b;
      }
    }
    const bool hit = best != 0 && best_iou >= cfg.min_iou;
    if (hit) taken[best] = true;
    out.push_back({score[a], hit});
  }
  return ng;
}

// Region AP over all frames: each predicted region is a true positive when it
// claims an unmatched ground-truth region of the same frame with IoU >=
// min_iou (greedy, highest score first, best IoU wins); unmatched
// ground-truth regions count as missed positives.
inline ApResult region_ap(std::span<const EvalPair> pairs,
                          const RegionMatchConfig& cfg = {}) {
  if (!(cfg.min_iou > 0.0 && cfg.min_iou <= 1.0)) {
    throw ConfigError("min_iou must lie in (0,1]");
  }
  std::vector<ScoredInstance> inst;
  std::size_t gt_regions = 0;
  for (const auto& p : pairs) {
    detail::check_pair(p);
    for (std::size_t f = 0; f < p.gt->size(); ++f) {
      gt_regions += match_frame_regions(p.pred->maps[f], (*p.gt)[f], cfg, inst);
    }
  }
  if (gt_regions == 0) throw MetricError("region AP needs ground-truth regions");
  std::size_t matched = 0;
  for (const auto& i : inst) matched += i.label;
  ApResult r = average_precision_detail(inst, gt_regions - matched);
  r.n_instances = inst.size();
  return r;
}

struct EvalMetrics {
  ApResult pixel;
  ApResult region;
  ApResult frame;
  ApResult stack;
};

struct EvalConfig {
  PixelApConfig pixel;
  RegionMatchConfig region;
  ScoreReduction reduction;
};

inline EvalMetrics evaluate_all(std::span<const EvalPair> pairs,
                                const EvalConfig& cfg = {}) {
  return {pixel_ap(pairs, cfg.pixel), region_ap(pairs, cfg.region),
          frame_ap(pairs, cfg.reduction), stack_ap(pairs, cfg.reduction)};
}

}  // namespace alcost
