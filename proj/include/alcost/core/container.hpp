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

// Stack container ("ALST"), little-endian:
//
//   offset  size  field
//   0       4     magic "ALST"
//   4       2     version (1)
//   6       2     flags (bit 0: masks present)
//   8       4     height
//   12      4     width
//   16      4     frame_count
//   20      F*H*W*4  f32 pixels, frame-major then row-major
//   ...     F*H*W    u8 mask bytes (0/1), only when flag bit 0 is set
//
// The container carries pixels and masks only. Identity, split and labeling
// time live in the manifest; a stack loaded on its own takes its id from the
// file stem.

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "alcost/core/binary_io.hpp"
#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

inline constexpr std::string_view kStackMagic = "ALST";
inline constexpr std::uint16_t kStackVersion = 1;
inline constexpr std::uint16_t kFlagMasks = 0x1;

// What the pixel payload is expected to hold. Probabilities are range
// checked on load.
enum class ValueDomain { kAny, kProbability };

inline std::vector<std::uint8_t> encode_stack(const Stack& stack) {
  validate(stack);
  io::ByteWriter out;
  out.raw(kStackMagic);
  out.u16(kStackVersion);
  out.u16(stack.gt_masks ? kFlagMasks : 0);
  out.u32(static_cast<std::uint32_t>(stack.height()));
  out.u32(static_cast<std::uint32_t>(stack.width()));
  out.u32(static_cast<std::uint32_t>(stack.frame_count()));
  for (const Frame& frame : stack.frames) {
    for (float v : frame.values()) out.f32(v);
  }
  if (stack.gt_masks) {
    for (const BinaryMask& mask : *stack.gt_masks) {
      for (std::uint8_t bit : mask.values()) out.u8(bit);
    }
  }
  return out.release();
}

inline Stack decode_stack(std::span<const std::uint8_t> bytes,
                          ValueDomain domain = ValueDomain::kAny) {
  io::ByteReader in(bytes);
  if (bytes.size() < 20) throw HeaderError("stack header truncated");
  if (in.raw(4) != kStackMagic) throw HeaderError("bad stack magic");
  const std::uint16_t version = in.u16();
  if (version != kStackVersion) {
    throw HeaderError("unsupported stack version " + std::to_string(version));
  }
  const std::uint16_t flags = in.u16();
  if ((flags & ~kFlagMasks) != 0) throw HeaderError("unknown stack flags");
  const std::uint64_t h = in.u32();
  const std::uint64_t w = in.u32();
  const std::uint64_t n = in.u32();
  if (h == 0 || w == 0 || n == 0) {
    throw HeaderError("stack header declares an empty stack");
  }
  const std::uint64_t cells = h * w * n;
  const std::uint64_t expected =
      cells * 4 + ((flags & kFlagMasks) ? cells : 0);
  if (in.remaining() != expected) {
    throw PayloadError("payload size " + std::to_string(in.remaining()) +
                       " does not match declared " + std::to_string(n) + "x" +
                       std::to_string(h) + "x" + std::to_string(w) +
                       " (expected " + std::to_string(expected) + " bytes)");
  }

  Stack stack;
  stack.frames.reserve(n);
  for (std::uint64_t f = 0; f < n; ++f) {
    Frame frame(h, w);
    for (float& v : frame.values()) {
      v = in.f32();
      if (!std::isfinite(v)) throw RangeError("non-finite pixel value");
      if (domain == ValueDomain::kProbability && !(v >= 0.0f && v <= 1.0f)) {
        throw RangeError("probability out of range: " + std::to_string(v));
      }
    }
    stack.frames.push_back(std::move(frame));
  }
  if (flags & kFlagMasks) {
    std::vector<BinaryMask> masks;
    masks.reserve(n);
    for (std::uint64_t f = 0; f < n; ++f) {
      BinaryMask mask(h, w);
      for (std::uint8_t& bit : mask.values()) {
        bit = in.u8();
        if (bit > 1) throw RangeError("mask byte not 0/1");
      }
      masks.push_back(std::move(mask));
    }
    stack.gt_masks = std::move(masks);
  }
  return stack;
}

inline void save_stack(const Stack& stack, const std::filesystem::path& path) {
  io::write_file(path, encode_stack(stack));
}

inline Stack load_stack(const std::filesystem::path& path,
                        ValueDomain domain = ValueDomain::kAny) {
  Stack stack = decode_stack(io::read_file(path), domain);
  stack.id = path.stem().string();
  return stack;
}

// Heatmaps travel in the same container with no masks.
inline void save_heatmap(const HeatmapStack& heatmap,
                         const std::filesystem::path& path) {
  Stack stack{.id = heatmap.stack_id, .frames = heatmap.maps};
  save_stack(stack, path);
}

inline HeatmapStack load_heatmap(const std::filesystem::path& path,
                                 ValueDomain domain = ValueDomain::kProbability) {
  Stack stack = load_stack(path, domain);
  return HeatmapStack{.stack_id = stack.id, .maps = std::move(stack.frames)};
}

}  // namespace alcost
