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

// Binary-mask morphology used by the labeling-time features: thresholding,
// 8-connected component labeling and 4-neighbour boundary length.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/grid.hpp"

namespace alcost {

// bit = 1 iff pixel >= tau.
inline BinaryMask threshold(const Frame& map, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw DomainError("threshold " + std::to_string(tau) +
                      " is outside (0,1)");
  }
  BinaryMask mask(map.height(), map.width());
  auto src = map.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<double>(src[i]) >= tau ? 1 : 0;
  }
  return mask;
}

struct ComponentLabels {
  // 0 for background, 1..count otherwise. Labels are numbered in the raster
  // order of each component's first pixel.
  Grid<std::uint32_t> labels;
  std::size_t count = 0;
};

namespace detail {

inline std::uint32_t find_root(std::vector<std::uint32_t>& parent,
                               std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace detail

// Two-pass union-find labeling with 8-connectivity.
inline ComponentLabels connected_components(const BinaryMask& mask) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  ComponentLabels out{Grid<std::uint32_t>(h, w, 0), 0};
  std::vector<std::uint32_t> parent{0};
  auto& labels = out.labels;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      // Already-visited neighbours: W, NW, N, NE.
      std::uint32_t best = 0;
      std::uint32_t seen[4];
      int n_seen = 0;
      auto visit = [&](std::size_t rr, std::size_t cc) {
        const std::uint32_t l = labels(rr, cc);
        if (l == 0) return;
        seen[n_seen++] = l;
        const std::uint32_t root = detail::find_root(parent, l);
        if (best == 0 || root < best) best = root;
      };
      if (c > 0) visit(r, c - 1);
      if (r > 0) {
        if (c > 0) visit(r - 1, c - 1);
        visit(r - 1, c);
        if (c + 1 < w) visit(r - 1, c + 1);
      }
      if (best == 0) {
        best = static_cast<std::uint32_t>(parent.size());
        parent.push_back(best);
      } else {
        for (int i = 0; i < n_seen; ++i) {
          const std::uint32_t root = detail::find_root(parent, seen[i]);
          if (root != best) parent[root] = best;
        }
      }
      labels(r, c) = best;
    }
  }
  // Compact provisional labels into 1..count in raster order of first pixel.
  std::vector<std::uint32_t> compact(parent.size(), 0);
  std::uint32_t next = 0;
  for (std::uint32_t& l : labels.values()) {
    if (l == 0) continue;
    const std::uint32_t root = detail::find_root(parent, l);
    if (compact[root] == 0) compact[root] = ++next;
    l = compact[root];
  }
  out.count = next;
  return out;
}

// Number of exposed unit edges: each foreground pixel contributes one per
// 4-neighbour that is background or outside the frame.
inline double boundary_length(const BinaryMask& mask) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  std::size_t edges = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      edges += (r == 0 || !mask(r - 1, c));
      edges += (r + 1 == h || !mask(r + 1, c));
      edges += (c == 0 || !mask(r, c - 1));
      edges += (c + 1 == w || !mask(r, c + 1));
    }
  }
  return static_cast<double>(edges);
}

}  // namespace alcost
