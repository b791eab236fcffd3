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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alcost/committee/learner.hpp"
#include "alcost/committee/sliding_window.hpp"
#include "alcost/core/parallel.hpp"
#include "alcost/core/random.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

inline constexpr std::size_t kDefaultCommitteeSize = 4;

// N independently initialized reference learners trained on the same data.
struct Committee {
  std::vector<LinearPatchLearner> members;
  // Non-fatal training notes, e.g. single-class training data.
  std::vector<std::string> warnings;

  std::size_t size() const { return members.size(); }
};

struct CommitteeOptions {
  std::size_t n_members = kDefaultCommitteeSize;
  std::vector<std::uint64_t> seeds;
  // Each member trains on a with-replacement resample of the labeled frames.
  bool bootstrap = false;
  LearnerHyperparams hyper;
  int jobs = 1;
};

// Member seeds derived from one parent seed.
inline std::vector<std::uint64_t> member_seeds(std::uint64_t parent,
                                               std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = derive_seed(parent, "member", i);
  return seeds;
}

// Trains the committee on every frame of `labeled` in the given order.
// Member i uses seeds[i] for its initialization and derives its sample-order
// (and bootstrap) streams from it.
inline Committee train_committee(std::span<const Stack* const> labeled,
                                 const CommitteeOptions& options) {
  if (labeled.empty()) throw ConfigError("cannot train on an empty labeled set");
  if (options.n_members == 0) throw ConfigError("committee needs members");
  if (options.seeds.size() != options.n_members) {
    throw ConfigError("expected " + std::to_string(options.n_members) +
                      " seeds, got " + std::to_string(options.seeds.size()));
  }
  std::vector<TrainingFrame> frames;
  std::size_t positives = 0;
  std::size_t pixels = 0;
  for (const Stack* stack : labeled) {
    if (!stack->gt_masks) {
      throw ConfigError("labeled stack '" + stack->id + "' has no masks");
    }
    for (std::size_t f = 0; f < stack->frames.size(); ++f) {
      const BinaryMask& mask = (*stack->gt_masks)[f];
      frames.push_back({&stack->frames[f], &mask});
      for (std::uint8_t bit : mask.values()) positives += bit;
      pixels += mask.size();
    }
  }

  Committee committee;
  if (positives == 0 || positives == pixels) {
    committee.warnings.push_back(
        "degenerate training data: every labeled pixel is " +
        std::string(positives == 0 ? "background" : "foreground"));
  }
  committee.members.resize(options.n_members);
  parallel_for(options.n_members, options.jobs, [&](std::size_t i) {
    LearnerHyperparams hyper = options.hyper;
    hyper.init_seed = options.seeds[i];
    hyper.order_seed = derive_seed(options.seeds[i], "order");
    if (!options.bootstrap) {
      committee.members[i] = train_learner(frames, hyper);
      return;
    }
    Rng rng(derive_seed(options.seeds[i], "bootstrap"));
    std::uniform_int_distribution<std::size_t> pick(0, frames.size() - 1);
    std::vector<TrainingFrame> resample(frames.size());
    for (auto& tf : resample) tf = frames[pick(rng)];
    committee.members[i] = train_learner(resample, hyper);
  });
  return committee;
}

inline Committee train_committee(const std::vector<Stack>& labeled,
                                 const CommitteeOptions& options) {
  std::vector<const Stack*> ptrs;
  for (const auto& s : labeled) ptrs.push_back(&s);
  return train_committee(ptrs, options);
}

// One heatmap per member.
template <PatchPredictor P>
std::vector<HeatmapStack> committee_heatmaps(std::span<const P> members,
                                             std::string_view id,
                                             std::span<const Frame> frames,
                                             std::size_t patch,
                                             std::size_t stride) {
  std::vector<HeatmapStack> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    out.push_back(sliding_window_predict(m, id, frames, patch, stride));
  }
  return out;
}

// Evaluates every member on one shared feature computation per pixel.
// Outputs match running each member's predict_patch separately.
struct SharedFeatureEnsemble {
  std::span<const LinearPatchLearner> members;

  std::size_t outputs() const { return members.size(); }

  std::vector<std::vector<float>> predict_patch_all(std::span<const float> patch,
                                                    std::size_t side) const {
    PatchFeatureExtractor extractor(patch, side);
    std::vector<std::vector<float>> out(members.size(),
                                        std::vector<float>(patch.size()));
    FeatureVector f{};
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        extractor.compute(r, c, f);
        for (std::size_t k = 0; k < members.size(); ++k) {
          out[k][r * side + c] =
              static_cast<float>(sigmoid(members[k].logit(f)));
        }
      }
    }
    return out;
  }
};

inline std::vector<HeatmapStack> committee_heatmaps(
    const Committee& committee, std::string_view id,
    std::span<const Frame> frames, std::size_t patch, std::size_t stride) {
  return sliding_window_predict_all(SharedFeatureEnsemble{committee.members},
                                    id, frames, patch, stride);
}

inline std::vector<HeatmapStack> committee_heatmaps(const Committee& committee,
                                                    const Stack& stack,
                                                    std::size_t patch,
                                                    std::size_t stride) {
  return committee_heatmaps(committee, stack.id,
                            std::span<const Frame>(stack.frames), patch, stride);
}

}  // namespace alcost
