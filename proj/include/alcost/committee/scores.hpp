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
#include <functional>
#include <vector>

#include "alcost/core/types.hpp"

namespace alcost {

// How pixel probabilities reduce to a frame score. kMax is the default; the
// top-k mean smooths out single-pixel spikes.
struct ScoreReduction {
  enum class Kind { kMax, kTopKMean };
  Kind kind = Kind::kMax;
  std::size_t k = 1;
};

struct FrameStackScores {
  std::vector<double> frame;
  double stack = 0.0;
};

inline double reduce_frame(const Frame& map, const ScoreReduction& reduction) {
  auto values = map.values();
  if (values.empty()) return 0.0;
  if (reduction.kind == ScoreReduction::Kind::kMax || reduction.k <= 1) {
    return *std::max_element(values.begin(), values.end());
  }
  std::vector<float> sorted(values.begin(), values.end());
  const std::size_t k = std::min(reduction.k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end(),
                    std::greater<>());
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += sorted[i];
  return total / static_cast<double>(k);
}

// Frame score reduces each map; the stack score is the max frame score.
inline FrameStackScores frame_and_stack_scores(
    const HeatmapStack& heatmap, const ScoreReduction& reduction = {}) {
  FrameStackScores out;
  out.frame.reserve(heatmap.maps.size());
  for (const Frame& map : heatmap.maps) {
    out.frame.push_back(reduce_frame(map, reduction));
  }
  if (!out.frame.empty()) {
    out.stack = *std::max_element(out.frame.begin(), out.frame.end());
  }
  return out;
}

}  // namespace alcost
