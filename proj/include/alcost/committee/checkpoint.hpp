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

// Predictor checkpoint ("ALPR"), little-endian:
//
//   magic "ALPR" | u16 version (1) | u16 reserved (0)
//   u16 basis id length | basis id bytes
//   u32 feature count | f64 weights[feature count] | f64 bias
//   f64 learning_rate | u32 epochs | f64 l2 | f64 init_scale
//   u64 init_seed | u64 order_seed | u32 patch_size | u32 pixels_per_patch
//   f64 lesion_focus

#pragma once

#include <filesystem>
#include <vector>

#include "alcost/committee/learner.hpp"
#include "alcost/core/binary_io.hpp"

namespace alcost {

inline constexpr std::string_view kCheckpointMagic = "ALPR";
inline constexpr std::uint16_t kCheckpointVersion = 1;

inline std::vector<std::uint8_t> encode_checkpoint(
    const LinearPatchLearner& learner) {
  io::ByteWriter out;
  out.raw(kCheckpointMagic);
  out.u16(kCheckpointVersion);
  out.u16(0);
  out.u16(static_cast<std::uint16_t>(kFeatureBasisId.size()));
  out.raw(kFeatureBasisId);
  out.u32(static_cast<std::uint32_t>(learner.weights().size()));
  for (double w : learner.weights()) out.f64(w);
  out.f64(learner.bias());
  const auto& h = learner.hyperparams();
  out.f64(h.learning_rate);
  out.u32(h.epochs);
  out.f64(h.l2);
  out.f64(h.init_scale);
  out.u64(h.init_seed);
  out.u64(h.order_seed);
  out.u32(h.patch_size);
  out.u32(h.pixels_per_patch);
  out.f64(h.lesion_focus);
  return out.release();
}

inline LinearPatchLearner decode_checkpoint(
    std::span<const std::uint8_t> bytes) {
  io::ByteReader in(bytes);
  if (bytes.size() < 8 || in.raw(4) != kCheckpointMagic) {
    throw HeaderError("bad checkpoint magic");
  }
  if (in.u16() != kCheckpointVersion) {
    throw HeaderError("unsupported checkpoint version");
  }
  in.u16();
  const std::string basis = in.raw(in.u16());
  if (basis != kFeatureBasisId) {
    throw HeaderError("checkpoint uses unknown feature basis '" + basis + "'");
  }
  const std::uint32_t n = in.u32();
  if (n != kFeatureCount) {
    throw PayloadError("checkpoint weight count " + std::to_string(n) +
                       " does not match basis length " +
                       std::to_string(kFeatureCount));
  }
  std::vector<double> weights(n);
  for (double& w : weights) w = in.f64();
  const double bias = in.f64();
  LearnerHyperparams h;
  h.learning_rate = in.f64();
  h.epochs = in.u32();
  h.l2 = in.f64();
  h.init_scale = in.f64();
  h.init_seed = in.u64();
  h.order_seed = in.u64();
  h.patch_size = in.u32();
  h.pixels_per_patch = in.u32();
  h.lesion_focus = in.f64();
  if (in.remaining() != 0) throw PayloadError("trailing bytes in checkpoint");
  return LinearPatchLearner(std::move(weights), bias, h);
}

inline void save_checkpoint(const LinearPatchLearner& learner,
                            const std::filesystem::path& path) {
  io::write_file(path, encode_checkpoint(learner));
}

inline LinearPatchLearner load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(io::read_file(path));
}

}  // namespace alcost
