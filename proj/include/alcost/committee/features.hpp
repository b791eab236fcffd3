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

// Local feature basis of the reference learner ("local-hat-v2").
//
// For a pixel at (row, col) of a square patch of side s, with all windows
// clipped to the patch:
//
//   index  feature
//   0      raw intensity x
//   1      mean over the 3x3 window
//   2      4 * standard deviation over the 3x3 window
//   3      mean over the 7x7 window
//   4      4 * standard deviation over the 7x7 window
//   5      u = (2*col + 1) / s - 1       (in [-1, 1])
//   6      v = (2*row + 1) / s - 1
//   7..16  hat encoding of x over 10 knots evenly spaced on [0, 1]
//   17..26 hat encoding of the 7x7 mean over the same knots
//   27..36 hat encoding of the 3x3 mean over the same knots
//
// A hat encoding of value y (clamped to [0,1]) is zero except at the two
// knots bracketing y, whose entries are the linear interpolation weights.
// The encoded features let a linear model express a piecewise-linear
// response to brightness, with one weight per brightness band.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "alcost/core/error.hpp"

namespace alcost {

inline constexpr std::string_view kFeatureBasisId = "local-hat-v2";
inline constexpr std::size_t kHatKnots = 10;
inline constexpr std::size_t kDenseFeatures = 7;
inline constexpr std::size_t kFeatureCount = kDenseFeatures + 3 * kHatKnots;

using FeatureVector = std::array<double, kFeatureCount>;

namespace detail {

inline void hat_encode(double y, std::span<double> out) {
  const double clamped = std::clamp(y, 0.0, 1.0);
  const double pos = clamped * static_cast<double>(kHatKnots - 1);
  const std::size_t k =
      std::min(static_cast<std::size_t>(pos), kHatKnots - 2);
  const double frac = pos - static_cast<double>(k);
  std::fill(out.begin(), out.end(), 0.0);
  out[k] = 1.0 - frac;
  out[k + 1] = frac;
}

}  // namespace detail

// Precomputes summed-area tables of one patch so each pixel's features cost
// a handful of lookups.
class PatchFeatureExtractor {
 public:
  PatchFeatureExtractor(std::span<const float> patch, std::size_t side)
      : patch_(patch), side_(side) {
    if (side == 0 || patch.size() != side * side) {
      throw ConfigError("patch must be a non-empty square");
    }
    const std::size_t n = side + 1;
    sum_.assign(n * n, 0.0);
    sum_sq_.assign(n * n, 0.0);
    for (std::size_t r = 0; r < side; ++r) {
      double row_sum = 0.0;
      double row_sq = 0.0;
      for (std::size_t c = 0; c < side; ++c) {
        const double x = patch[r * side + c];
        row_sum += x;
        row_sq += x * x;
        sum_[(r + 1) * n + c + 1] = sum_[r * n + c + 1] + row_sum;
        sum_sq_[(r + 1) * n + c + 1] = sum_sq_[r * n + c + 1] + row_sq;
      }
    }
  }

  std::size_t side() const { return side_; }

  void compute(std::size_t row, std::size_t col, FeatureVector& out) const {
    const double x = patch_[row * side_ + col];
    out[0] = x;
    auto [mean3, sd3] = window_stats(row, col, 1);
    auto [mean7, sd7] = window_stats(row, col, 3);
    out[1] = mean3;
    out[2] = 4.0 * sd3;
    out[3] = mean7;
    out[4] = 4.0 * sd7;
    const double s = static_cast<double>(side_);
    out[5] = (2.0 * static_cast<double>(col) + 1.0) / s - 1.0;
    out[6] = (2.0 * static_cast<double>(row) + 1.0) / s - 1.0;
    detail::hat_encode(x, std::span(out).subspan(kDenseFeatures, kHatKnots));
    detail::hat_encode(mean7, std::span(out).subspan(kDenseFeatures + kHatKnots,
                                                     kHatKnots));
    detail::hat_encode(mean3, std::span(out).subspan(
                                  kDenseFeatures + 2 * kHatKnots, kHatKnots));
  }

 private:
  std::pair<double, double> window_stats(std::size_t row, std::size_t col,
                                         std::size_t radius) const {
    const std::size_t r0 = row >= radius ? row - radius : 0;
    const std::size_t c0 = col >= radius ? col - radius : 0;
    const std::size_t r1 = std::min(side_, row + radius + 1);
    const std::size_t c1 = std::min(side_, col + radius + 1);
    const std::size_t n = side_ + 1;
    auto box = [&](const std::vector<double>& t) {
      return t[r1 * n + c1] - t[r0 * n + c1] - t[r1 * n + c0] + t[r0 * n + c0];
    };
    const double count = static_cast<double>((r1 - r0) * (c1 - c0));
    const double mean = box(sum_) / count;
    const double var = std::max(0.0, box(sum_sq_) / count - mean * mean);
    return {mean, std::sqrt(var)};
  }

  std::span<const float> patch_;
  std::size_t side_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

}  // namespace alcost
