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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace alcost {

// Dense row-major 2D grid.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), values_(height * width, fill) {}
  Grid(std::size_t height, std::size_t width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(std::size_t row, std::size_t col) {
    return values_[row * width_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  bool same_shape(std::size_t height, std::size_t width) const {
    return height_ == height && width_ == width;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.height(), other.width());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> values_;
};

// Intensity or probability values of one 2D slice.
using Frame = Grid<float>;
// Values are exactly 0 or 1.
using BinaryMask = Grid<std::uint8_t>;

}  // namespace alcost
