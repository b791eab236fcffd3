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
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

// Anything that maps a square patch of intensities (row-major, side x side)
// to a same-sized grid of probabilities in [0,1], deterministically.
template <typename P>
concept PatchPredictor = requires(const P& p, std::span<const float> patch,
                                  std::size_t side) {
  { p.predict_patch(patch, side) } -> std::convertible_to<std::vector<float>>;
};

// Window offsets along one axis: 0, stride, 2*stride, ... while the window
// fits, plus a final window snapped to the far border when the grid leaves a
// remainder.
inline std::vector<std::size_t> window_starts(std::size_t extent,
                                              std::size_t patch,
                                              std::size_t stride) {
  if (patch == 0 || stride == 0 || stride > patch) {
    throw ConfigError("need 1 <= stride <= patch_size");
  }
  if (patch > extent) {
    throw ConfigError("patch size " + std::to_string(patch) +
                      " exceeds frame extent " + std::to_string(extent));
  }
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + patch <= extent; s += stride) starts.push_back(s);
  if (starts.back() + patch < extent) starts.push_back(extent - patch);
  return starts;
}

// Anything that maps one patch to several same-sized probability grids at
// once, e.g. a committee sharing its feature computation.
template <typename P>
concept MultiPatchPredictor = requires(const P& p, std::span<const float> patch,
                                       std::size_t side) {
  { p.outputs() } -> std::convertible_to<std::size_t>;
  {
    p.predict_patch_all(patch, side)
  } -> std::convertible_to<std::vector<std::vector<float>>>;
};

// Whole-stack inference by tiling every frame with patch x patch windows.
// Overlapping predictions are averaged, so each pixel's weights sum to one.
// Returns one heatmap per predictor output.
template <MultiPatchPredictor P>
std::vector<HeatmapStack> sliding_window_predict_all(
    const P& predictor, std::string_view id, std::span<const Frame> frames,
    std::size_t patch, std::size_t stride) {
  if (frames.empty()) throw ConfigError("stack has no frames");
  const std::size_t h = frames.front().height();
  const std::size_t w = frames.front().width();
  const auto rows = window_starts(h, patch, stride);
  const auto cols = window_starts(w, patch, stride);
  const std::size_t n_out = predictor.outputs();

  std::vector<HeatmapStack> out(n_out);
  for (auto& hm : out) {
    hm.stack_id = std::string(id);
    hm.maps.reserve(frames.size());
  }
  std::vector<std::vector<double>> sum(n_out, std::vector<double>(h * w));
  std::vector<std::uint16_t> count(h * w);
  std::vector<float> window(patch * patch);
  for (const Frame& frame : frames) {
    if (!frame.same_shape(h, w)) {
      throw ConfigError("frames of '" + std::string(id) + "' differ in size");
    }
    for (auto& s : sum) std::fill(s.begin(), s.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t top : rows) {
      for (std::size_t left : cols) {
        for (std::size_t r = 0; r < patch; ++r) {
          for (std::size_t c = 0; c < patch; ++c) {
            window[r * patch + c] = frame(top + r, left + c);
          }
        }
        const std::vector<std::vector<float>> preds =
            predictor.predict_patch_all(window, patch);
        if (preds.size() != n_out) {
          throw InvariantError("predictor returned " +
                               std::to_string(preds.size()) + " outputs, not " +
                               std::to_string(n_out));
        }
        for (std::size_t k = 0; k < n_out; ++k) {
          const auto& pred = preds[k];
          if (pred.size() != window.size()) {
            throw InvariantError("predictor returned " +
                                 std::to_string(pred.size()) +
                                 " values for a " +
                                 std::to_string(window.size()) + "-pixel patch");
          }
          for (std::size_t r = 0; r < patch; ++r) {
            for (std::size_t c = 0; c < patch; ++c) {
              const float p = pred[r * patch + c];
              if (!(p >= 0.0f && p <= 1.0f)) {
                throw InvariantError("predictor output outside [0,1]");
              }
              sum[k][(top + r) * w + left + c] += p;
            }
          }
        }
        for (std::size_t r = 0; r < patch; ++r) {
          for (std::size_t c = 0; c < patch; ++c) ++count[(top + r) * w + left + c];
        }
      }
    }
    for (std::size_t k = 0; k < n_out; ++k) {
      Frame map(h, w);
      auto values = map.values();
      for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<float>(sum[k][i] / count[i]);
      }
      out[k].maps.push_back(std::move(map));
    }
  }
  return out;
}

namespace detail {

template <PatchPredictor P>
struct SingleOutput {
  const P& predictor;
  std::size_t outputs() const { return 1; }
  std::vector<std::vector<float>> predict_patch_all(std::span<const float> patch,
                                                    std::size_t side) const {
    return {predictor.predict_patch(patch, side)};
  }
};

}  // namespace detail

template <PatchPredictor P>
HeatmapStack sliding_window_predict(const P& predictor, std::string_view id,
                                    std::span<const Frame> frames,
                                    std::size_t patch, std::size_t stride) {
  auto maps = sliding_window_predict_all(detail::SingleOutput<P>{predictor}, id,
                                         frames, patch, stride);
  return std::move(maps.front());
}

template <PatchPredictor P>
HeatmapStack sliding_window_predict(const P& predictor, const Stack& stack,
                                    std::size_t patch, std::size_t stride) {
  return sliding_window_predict(predictor, stack.id,
                                std::span<const Frame>(stack.frames), patch,
                                stride);
}

}  // namespace alcost
