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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/uncertainty/js.hpp"

namespace alcost {

struct AggregationConfig {
  // Number of most uncertain patches averaged into the stack value.
  std::size_t top_k = 74;
  // Side of the non-overlapping aggregation patches.
  std::size_t patch_size = 16;
};

// Reference geometry the top-k default is scaled from: 512x512 frames cut
// into 160-pixel patches (4x4 grid with border remainders) and ~32.5 frames
// per stack, averaged with K = 200.
inline constexpr double kReferencePatchesPerStack = 16.0 * 32.5;
inline constexpr double kReferenceTopK = 200.0;

// ceil(200 * patches_per_stack / 520); at least 1. For 64x64 frames, 16-pixel
// patches and 12 frames on average this gives 74.
inline std::size_t default_top_k(std::size_t height, std::size_t width,
                                 std::size_t patch_size,
                                 double mean_frames_per_stack) {
  const auto per_axis = [&](std::size_t extent) {
    return static_cast<double>((extent + patch_size - 1) / patch_size);
  };
  const double patches =
      per_axis(height) * per_axis(width) * mean_frames_per_stack;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(kReferenceTopK * patches / kReferencePatchesPerStack -
                       1e-9)));
}

struct PatchUncertainty {
  std::size_t frame = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  double mean = 0.0;
};

struct StackUncertainty {
  std::string stack_id;
  double value = 0.0;
};

// Mean JS over each cell of a non-overlapping patch grid; border cells that
// are cut short average over the pixels they actually contain.
inline std::vector<PatchUncertainty> patch_uncertainties(
    const UncertaintyMap& map, const AggregationConfig& cfg) {
  if (cfg.patch_size == 0) throw ConfigError("aggregation patch size is 0");
  std::vector<PatchUncertainty> out;
  const std::size_t p = cfg.patch_size;
  for (std::size_t f = 0; f < map.maps.size(); ++f) {
    const Frame& m = map.maps[f];
    for (std::size_t r0 = 0; r0 < m.height(); r0 += p) {
      for (std::size_t c0 = 0; c0 < m.width(); c0 += p) {
        const std::size_t r1 = std::min(m.height(), r0 + p);
        const std::size_t c1 = std::min(m.width(), c0 + p);
        double total = 0.0;
        for (std::size_t r = r0; r < r1; ++r) {
          for (std::size_t c = c0; c < c1; ++c) total += m(r, c);
        }
        out.push_back({f, r0, c0,
                       total / static_cast<double>((r1 - r0) * (c1 - c0))});
      }
    }
  }
  return out;
}

// Mean of the top_k largest patch means (all of them when fewer exist). The
// values are sorted before summing, so the result does not depend on the
// order of `patches`.
inline double top_k_mean(std::span<const PatchUncertainty> patches,
                         std::size_t top_k) {
  if (patches.empty()) throw ConfigError("stack has no patches");
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
  std::vector<double> values;
  values.reserve(patches.size());
  for (const auto& p : patches) values.push_back(p.mean);
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t k = std::min(top_k, values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += values[i];
  return total / static_cast<double>(k);
}

inline StackUncertainty stack_uncertainty(
    const std::string& stack_id, std::span<const PatchUncertainty> patches,
    const AggregationConfig& cfg) {
  return {stack_id, top_k_mean(patches, cfg.top_k)};
}

}  // namespace alcost
