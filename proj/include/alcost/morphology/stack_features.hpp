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

#pragma once

#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"
#include "alcost/morphology/morphology.hpp"

namespace alcost {

// Strictly ascending thresholds in (0,1).
class ThresholdSet {
 public:
  ThresholdSet() : ThresholdSet({0.3, 0.5, 0.7}) {}
  ThresholdSet(std::vector<double> thresholds)
      : thresholds_(std::move(thresholds)) {
    if (thresholds_.empty()) throw ConfigError("threshold set is empty");
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      const double t = thresholds_[i];
      if (!(t > 0.0 && t < 1.0)) {
        throw ConfigError("threshold " + std::to_string(t) +
                          " is outside (0,1)");
      }
      if (i > 0 && !(t > thresholds_[i - 1])) {
        throw ConfigError("thresholds must be strictly ascending");
      }
    }
  }

  const std::vector<double>& values() const { return thresholds_; }
  std::size_t size() const { return thresholds_.size(); }

 private:
  std::vector<double> thresholds_;
};

// Boundary length and component count summed over the frames of a stack.
struct MaskTotals {
  double boundary = 0.0;
  double components = 0.0;
};

struct ThresholdFeatures {
  double tau = 0.0;
  double boundary = 0.0;
  double components = 0.0;
};

// Labeling-time features of one stack: B and M averaged over thresholds.
struct StackFeatures {
  std::string stack_id;
  double boundary = 0.0;    // B
  double components = 0.0;  // M
  std::vector<ThresholdFeatures> per_threshold;
};

inline MaskTotals mask_totals(const std::vector<BinaryMask>& masks) {
  MaskTotals totals;
  for (const BinaryMask& m : masks) {
    totals.boundary += boundary_length(m);
    totals.components += static_cast<double>(connected_components(m).count);
  }
  return totals;
}

inline HeatmapStack mean_heatmap(
    const std::vector<HeatmapStack>& committee_heatmaps) {
  require_aligned(committee_heatmaps);
  const HeatmapStack& first = committee_heatmaps.front();
  HeatmapStack out{.stack_id = first.stack_id, .maps = {}};
  const double n = static_cast<double>(committee_heatmaps.size());
  for (std::size_t f = 0; f < first.maps.size(); ++f) {
    Frame map(first.maps[f].height(), first.maps[f].width());
    auto dst = map.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      double total = 0.0;
      for (const auto& h : committee_heatmaps) total += h.maps[f].values()[i];
      dst[i] = static_cast<float>(total / n);
    }
    out.maps.push_back(std::move(map));
  }
  return out;
}

// For each threshold, B and M are summed over frames (components are
// counted per frame in 2D); the result averages those totals over the
// thresholds.
inline StackFeatures stack_features(const HeatmapStack& mean,
                                    const ThresholdSet& thresholds = {}) {
  StackFeatures out{.stack_id = mean.stack_id};
  for (double tau : thresholds.values()) {
    ThresholdFeatures t{.tau = tau};
    for (const Frame& map : mean.maps) {
      const BinaryMask mask = threshold(map, tau);
      t.boundary += boundary_length(mask);
      t.components += static_cast<double>(connected_components(mask).count);
    }
    out.boundary += t.boundary;
    out.components += t.components;
    out.per_threshold.push_back(t);
  }
  const double n = static_cast<double>(thresholds.size());
  out.boundary /= n;
  out.components /= n;
  return out;
}

}  // namespace alcost
