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

// Committee disagreement. Each member's per-pixel prediction is a Bernoulli
// distribution; the Jensen-Shannon divergence of N such distributions is the
// entropy of their mean minus the mean of their entropies, in bits, and lies
// in [0, log2 N].

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

inline constexpr double kJsNegativeTolerance = 1e-12;

// Entropy of Bernoulli(p) in bits, with 0 log 0 = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary_entropy: p = " + std::to_string(p) +
                      " is outside [0,1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

// Throws InternalError when rounding drives the raw value below
// -kJsNegativeTolerance; smaller negatives are clamped to zero.
inline double js_divergence(std::span<const double> probs) {
  if (probs.size() < 2) {
    throw ConfigError("js_divergence needs at least 2 committee members");
  }
  double mean = 0.0;
  double mean_entropy = 0.0;
  for (double p : probs) {
    mean_entropy += binary_entropy(p);
    mean += p;
  }
  const double n = static_cast<double>(probs.size());
  mean /= n;
  mean_entropy /= n;
  // Guard against the mean drifting past 1 by one ulp.
  if (mean > 1.0) mean = 1.0;
  const double raw = binary_entropy(mean) - mean_entropy;
  if (raw < -kJsNegativeTolerance) {
    throw InternalError("negative JS divergence " + std::to_string(raw));
  }
  return raw < 0.0 ? 0.0 : raw;
}

// Per-pixel JS values (bits), one grid per frame.
struct UncertaintyMap {
  std::string stack_id;
  std::vector<Frame> maps;
};

inline UncertaintyMap uncertainty_map(
    const std::vector<HeatmapStack>& committee_heatmaps) {
  require_aligned(committee_heatmaps);
  if (committee_heatmaps.size() < 2) {
    throw ConfigError("uncertainty map needs at least 2 committee members");
  }
  const HeatmapStack& first = committee_heatmaps.front();
  UncertaintyMap out{.stack_id = first.stack_id, .maps = {}};
  std::vector<double> probs(committee_heatmaps.size());
  for (std::size_t f = 0; f < first.maps.size(); ++f) {
    Frame map(first.maps[f].height(), first.maps[f].width());
    auto values = map.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t m = 0; m < committee_heatmaps.size(); ++m) {
        probs[m] = committee_heatmaps[m].maps[f].values()[i];
      }
      values[i] = static_cast<float>(js_divergence(probs));
    }
    out.maps.push_back(std::move(map));
  }
  return out;
}

// Single-model baseline: per-pixel binary entropy of one member's output.
inline UncertaintyMap entropy_map(const HeatmapStack& heatmap) {
  UncertaintyMap out{.stack_id = heatmap.stack_id, .maps = {}};
  for (const Frame& m : heatmap.maps) {
    Frame map(m.height(), m.width());
    auto src = m.values();
    auto dst = map.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = static_cast<float>(binary_entropy(src[i]));
    }
    out.maps.push_back(std::move(map));
  }
  return out;
}

}  // namespace alcost
