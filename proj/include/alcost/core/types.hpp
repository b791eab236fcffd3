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

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/grid.hpp"

namespace alcost {

// Role of a stack in an experiment. Seed splits are the initially labeled
// corpus; pool splits are the unlabeled corpus and its held-out test set.
enum class Split { kSeedTrainval, kSeedTest, kPool, kPoolTest };

inline std::string_view to_string(Split split) {
  switch (split) {
    case Split::kSeedTrainval:
      return "seed_trainval";
    case Split::kSeedTest:
      return "seed_test";
    case Split::kPool:
      return "pool";
    case Split::kPoolTest:
      return "pool_test";
  }
  return "pool";
}

inline Split parse_split(std::string_view text) {
  if (text == "seed_trainval") return Split::kSeedTrainval;
  if (text == "seed_test") return Split::kSeedTest;
  if (text == "pool") return Split::kPool;
  if (text == "pool_test") return Split::kPoolTest;
  throw ConfigError("unknown split '" + std::string(text) + "'");
}

// A volumetric scan: an ordered sequence of equally sized frames, optionally
// with aligned ground-truth masks and an observed labeling time.
struct Stack {
  std::string id;
  std::vector<Frame> frames;
  std::optional<std::vector<BinaryMask>> gt_masks;
  std::optional<double> gt_label_time;
  Split split = Split::kPool;

  std::size_t height() const { return frames.empty() ? 0 : frames[0].height(); }
  std::size_t width() const { return frames.empty() ? 0 : frames[0].width(); }
  std::size_t frame_count() const { return frames.size(); }
  bool has_masks() const { return gt_masks.has_value(); }

  friend bool operator==(const Stack&, const Stack&) = default;
};

// Per-pixel probability maps for one stack.
struct HeatmapStack {
  std::string stack_id;
  std::vector<Frame> maps;

  std::size_t height() const { return maps.empty() ? 0 : maps[0].height(); }
  std::size_t width() const { return maps.empty() ? 0 : maps[0].width(); }

  friend bool operator==(const HeatmapStack&, const HeatmapStack&) = default;
};

// Throws InvariantError when frames are empty, ragged, non-finite, or when
// masks/time do not line up with them.
inline void validate(const Stack& stack) {
  if (stack.frames.empty()) {
    throw InvariantError("stack '" + stack.id + "' has no frames");
  }
  const std::size_t h = stack.height();
  const std::size_t w = stack.width();
  if (h == 0 || w == 0) {
    throw InvariantError("stack '" + stack.id + "' has zero-sized frames");
  }
  for (const Frame& frame : stack.frames) {
    if (!frame.same_shape(h, w) || frame.size() != h * w) {
      throw InvariantError("stack '" + stack.id +
                           "' has frames of differing dimensions");
    }
    for (float v : frame.values()) {
      if (!std::isfinite(v)) {
        throw InvariantError("stack '" + stack.id + "' has non-finite pixels");
      }
    }
  }
  if (stack.gt_masks) {
    if (stack.gt_masks->size() != stack.frames.size()) {
      throw InvariantError("stack '" + stack.id +
                           "': mask count differs from frame count");
    }
    for (const BinaryMask& mask : *stack.gt_masks) {
      if (!mask.same_shape(h, w) || mask.size() != h * w) {
        throw InvariantError("stack '" + stack.id +
                             "': mask dimensions differ from frame dimensions");
      }
      for (std::uint8_t bit : mask.values()) {
        if (bit > 1) {
          throw InvariantError("stack '" + stack.id + "': mask value not 0/1");
        }
      }
    }
  }
  if (stack.gt_label_time && !(*stack.gt_label_time > 0.0)) {
    throw InvariantError("stack '" + stack.id +
                         "': gt_label_time must be positive");
  }
}

inline bool is_probability_frame(const Frame& frame) {
  for (float v : frame.values()) {
    if (!(v >= 0.0f && v <= 1.0f)) return false;
  }
  return true;
}

inline void validate(const HeatmapStack& heatmap) {
  if (heatmap.maps.empty()) {
    throw InvariantError("heatmap '" + heatmap.stack_id + "' has no maps");
  }
  for (const Frame& map : heatmap.maps) {
    if (!map.same_shape(heatmap.maps[0]) || map.empty()) {
      throw InvariantError("heatmap '" + heatmap.stack_id +
                           "' has maps of differing dimensions");
    }
    if (!is_probability_frame(map)) {
      throw InvariantError("heatmap '" + heatmap.stack_id +
                           "' has values outside [0,1]");
    }
  }
}

// Throws ConfigError unless every heatmap has the same id, frame count and
// frame dimensions as the first.
inline void require_aligned(const std::vector<HeatmapStack>& heatmaps) {
  if (heatmaps.empty()) throw ConfigError("no heatmaps given");
  const HeatmapStack& first = heatmaps.front();
  for (const HeatmapStack& h : heatmaps) {
    if (h.stack_id != first.stack_id) {
      throw ConfigError("heatmaps refer to different stacks ('" +
                        first.stack_id + "' vs '" + h.stack_id + "')");
    }
    if (h.maps.size() != first.maps.size()) {
      throw ConfigError("heatmaps of '" + first.stack_id +
                        "' differ in frame count");
    }
    for (std::size_t f = 0; f < h.maps.size(); ++f) {
      if (!h.maps[f].same_shape(first.maps[f])) {
        throw ConfigError("heatmaps of '" + first.stack_id +
                          "' differ in frame dimensions");
      }
    }
  }
}

}  // namespace alcost
