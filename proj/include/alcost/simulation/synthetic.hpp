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

// Synthetic head-scan stacks with ground-truth lesion masks and labeling
// times.
//
// Each frame is an elliptical "brain" of mid-grey tissue inside a bright
// skull ring on a dark background, plus Gaussian noise. Positive stacks carry
// one or more ellipsoidal lesions that span consecutive frames; any stack may
// also carry small bright calcification-like spots that are not lesions.
// Lesions come in two kinds: common ones of moderate brightness and rarer
// faint ones whose brightness sits close to tissue.
//
// Labeling time follows the log-linear model on the ground-truth masks,
//   t = exp(alpha ln B + beta ln M + gamma) * exp(sigma z),
// and floor_time * exp(sigma z) for negatives.
//
// The pool splits can be drawn from a shifted domain (lesion brightness,
// size and image noise differ) to mimic data collected elsewhere.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/parallel.hpp"
#include "alcost/core/random.hpp"
#include "alcost/core/types.hpp"
#include "alcost/morphology/stack_features.hpp"

namespace alcost {

struct TimeModel {
  double alpha = 0.8;
  double beta = 0.4;
  double gamma = 2.0;
  double noise_sigma = 0.3;
  double floor_time = 60.0;
};

struct DomainShift {
  double intensity_offset = 0.0;
  double noise_scale = 1.0;
  double size_scale = 1.0;
  // Fraction of lesions drawn as the faint kind.
  double faint_fraction = 0.2;
};

struct SyntheticConfig {
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t frames_min = 8;
  std::size_t frames_max = 16;
  std::size_t n_trainval = 256;
  std::size_t n_test = 96;
  std::size_t n_pool = 256;
  std::size_t n_pool_test = 96;
  double positive_fraction = 0.6;

  // Lesion count per positive stack: 1 + geometric(extra_lesion_prob),
  // capped at max_lesions.
  std::size_t max_lesions = 4;
  double extra_lesion_prob = 0.4;
  // In-plane radius, log-uniform.
  double radius_min = 1.5;
  double radius_max = 12.0;
  double lesion_intensity_min = 0.6;
  double lesion_intensity_max = 0.8;
  double faint_intensity_min = 0.42;
  double faint_intensity_max = 0.5;

  double tissue_intensity = 0.3;
  double skull_intensity = 0.95;
  double noise_sigma = 0.05;
  // Mean number of calcification spots per stack (Poisson).
  double mimic_rate = 1.0;
  double mimic_intensity_min = 0.65;
  double mimic_intensity_max = 0.9;

  TimeModel time;
  // Applied to the seed splits (normally the identity) and the pool splits.
  // By default the pool comes from elsewhere: smaller lesions, noisier scans.
  DomainShift seed_domain;
  DomainShift pool_domain{.noise_scale = 1.5, .size_scale = 0.7};

  std::uint64_t seed = 1;
};

inline void validate(const SyntheticConfig& cfg) {
  if (cfg.height < 16 || cfg.width < 16) {
    throw ConfigError("synthetic frames must be at least 16x16");
  }
  if (cfg.frames_min == 0 || cfg.frames_max < cfg.frames_min) {
    throw ConfigError("invalid frames-per-stack range");
  }
  if (!(cfg.radius_min > 0.0) || cfg.radius_max < cfg.radius_min) {
    throw ConfigError("invalid lesion radius range");
  }
  for (const DomainShift* d : {&cfg.seed_domain, &cfg.pool_domain}) {
    const double r = cfg.radius_max * d->size_scale;
    if (2.0 * r >= 0.6 * static_cast<double>(std::min(cfg.height, cfg.width))) {
      throw ConfigError("lesion radius " + std::to_string(r) +
                        " too large for the frame");
    }
    if (!(d->noise_scale >= 0.0) || !(d->size_scale > 0.0)) {
      throw ConfigError("invalid domain shift");
    }
  }
  if (cfg.lesion_intensity_max < cfg.lesion_intensity_min ||
      cfg.faint_intensity_max < cfg.faint_intensity_min ||
      cfg.mimic_intensity_max < cfg.mimic_intensity_min) {
    throw ConfigError("invalid intensity range");
  }
  if (!(cfg.positive_fraction >= 0.0 && cfg.positive_fraction <= 1.0)) {
    throw ConfigError("positive_fraction must lie in [0,1]");
  }
  if (!(cfg.time.floor_time > 0.0)) throw ConfigError("floor_time must be > 0");
}

struct SyntheticDataset {
  // Ordered by split (seed_trainval, seed_test, pool, pool_test) then index.
  std::vector<Stack> stacks;

  std::vector<const Stack*> split(Split s) const {
    std::vector<const Stack*> out;
    for (const auto& st : stacks) {
      if (st.split == s) out.push_back(&st);
    }
    return out;
  }
};

inline std::string synthetic_id(Split split, std::size_t index) {
  const char* prefix = "trv";
  switch (split) {
    case Split::kSeedTrainval:
      prefix = "trv";
      break;
    case Split::kSeedTest:
      prefix = "tst";
      break;
    case Split::kPool:
      prefix = "pool";
      break;
    case Split::kPoolTest:
      prefix = "ptst";
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04zu", prefix, index);
  return buf;
}

namespace detail {

struct Ellipsoid {
  double z = 0.0, y = 0.0, x = 0.0;
  double rz = 0.0, ry = 0.0, rx = 0.0;
  double cos_t = 1.0, sin_t = 0.0;
  float intensity = 0.0f;

  // Normalized squared distance; <= 1 inside.
  double dist2(double zz, double yy, double xx) const {
    const double dy = yy - y;
    const double dx = xx - x;
    const double u = dx * cos_t + dy * sin_t;
    const double v = -dx * sin_t + dy * cos_t;
    const double dz = (zz - z) / rz;
    return (u / rx) * (u / rx) + (v / ry) * (v / ry) + dz * dz;
  }
};

inline Stack generate_stack(const SyntheticConfig& cfg, Split split,
                            std::size_t index, bool positive) {
  const DomainShift& dom =
      (split == Split::kPool || split == Split::kPoolTest) ? cfg.pool_domain
                                                           : cfg.seed_domain;
  Rng rng(derive_seed(cfg.seed, to_string(split), index));
  const std::size_t h = cfg.height;
  const std::size_t w = cfg.width;
  const std::size_t nf =
      std::uniform_int_distribution<std::size_t>(cfg.frames_min,
                                                 cfg.frames_max)(rng);
  const double cy = (static_cast<double>(h) - 1.0) / 2.0 + uniform(rng, -1.5, 1.5);
  const double cx = (static_cast<double>(w) - 1.0) / 2.0 + uniform(rng, -1.5, 1.5);
  const double ay = 0.44 * static_cast<double>(h) * uniform(rng, 0.93, 1.0);
  const double ax = 0.40 * static_cast<double>(w) * uniform(rng, 0.93, 1.0);
  const double skull = 2.2;  // ring thickness in pixels

  auto inside_brain = [&](double y, double x, double shrink) {
    const double dy = (y - cy) / (ay - shrink);
    const double dx = (x - cx) / (ax - shrink);
    return dy * dy + dx * dx <= 1.0;
  };

  std::vector<Ellipsoid> lesions;
  if (positive) {
    std::size_t count = 1;
    while (count < cfg.max_lesions && uniform01(rng) < cfg.extra_lesion_prob) {
      ++count;
    }
    for (std::size_t k = 0; k < count; ++k) {
      Ellipsoid e;
      const double r = std::exp(uniform(rng, std::log(cfg.radius_min),
                                        std::log(cfg.radius_max))) *
                       dom.size_scale;
      const double aspect = uniform(rng, 0.6, 1.0);
      e.rx = r;
      e.ry = r * aspect;
      e.rz = std::max(0.6, r * uniform(rng, 0.15, 0.45));
      const double theta = uniform(rng, 0.0, std::numbers::pi);
      e.cos_t = std::cos(theta);
      e.sin_t = std::sin(theta);
      e.z = uniform(rng, 0.0, static_cast<double>(nf) - 1.0);
      // Keep the lesion centre inside the brain, away from the skull.
      for (int attempt = 0; attempt < 100; ++attempt) {
        e.y = uniform(rng, cy - ay, cy + ay);
        e.x = uniform(rng, cx - ax, cx + ax);
        if (inside_brain(e.y, e.x, skull + r + 1.0)) break;
      }
      const bool faint = uniform01(rng) < dom.faint_fraction;
      const double level =
          faint ? uniform(rng, cfg.faint_intensity_min, cfg.faint_intensity_max)
                : uniform(rng, cfg.lesion_intensity_min,
                          cfg.lesion_intensity_max);
      e.intensity = static_cast<float>(level + dom.intensity_offset);
      lesions.push_back(e);
    }
  }

  struct Spot {
    std::size_t z;
    double y, x, r;
    float intensity;
  };
  std::vector<Spot> spots;
  const std::size_t n_spots =
      std::poisson_distribution<std::size_t>(cfg.mimic_rate)(rng);
  for (std::size_t k = 0; k < n_spots; ++k) {
    Spot s;
    s.z = std::uniform_int_distribution<std::size_t>(0, nf - 1)(rng);
    s.r = uniform(rng, 0.6, 1.3);
    for (int attempt = 0; attempt < 100; ++attempt) {
      s.y = uniform(rng, cy - ay, cy + ay);
      s.x = uniform(rng, cx - ax, cx + ax);
      if (inside_brain(s.y, s.x, skull + 2.0)) break;
    }
    s.intensity = static_cast<float>(
        uniform(rng, cfg.mimic_intensity_min, cfg.mimic_intensity_max));
    spots.push_back(s);
  }

  const double sigma = cfg.noise_sigma * dom.noise_scale;
  Stack stack;
  stack.id = synthetic_id(split, index);
  stack.split = split;
  std::vector<BinaryMask> masks;
  for (std::size_t z = 0; z < nf; ++z) {
    Frame frame(h, w);
    BinaryMask mask(h, w);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const double y = static_cast<double>(r);
        const double x = static_cast<double>(c);
        double v = 0.02;
        if (inside_brain(y, x, 0.0)) {
          v = inside_brain(y, x, skull) ? cfg.tissue_intensity
                                        : cfg.skull_intensity;
        }
        if (inside_brain(y, x, skull)) {
          for (const auto& e : lesions) {
            if (e.dist2(static_cast<double>(z), y, x) <= 1.0) {
              v = e.intensity;
              mask(r, c) = 1;
            }
          }
          for (const auto& s : spots) {
            if (s.z == z && (y - s.y) * (y - s.y) + (x - s.x) * (x - s.x) <=
                                s.r * s.r) {
              v = s.intensity;
            }
          }
        }
        v += normal(rng, 0.0, sigma);
        frame(r, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
    stack.frames.push_back(std::move(frame));
    masks.push_back(std::move(mask));
  }
  if (positive) {
    // Every positive stack shows at least one lesion pixel.
    bool any = false;
    for (const auto& m : masks) {
      for (auto b : m.values()) any = any || b;
    }
    if (!any) {
      const auto& e = lesions.front();
      const std::size_t z = std::min<std::size_t>(
          nf - 1, static_cast<std::size_t>(std::lround(e.z)));
      const std::size_t r = static_cast<std::size_t>(std::lround(e.y));
      const std::size_t c = static_cast<std::size_t>(std::lround(e.x));
      masks[z](r, c) = 1;
      stack.frames[z](r, c) = std::clamp(
          e.intensity + static_cast<float>(normal(rng, 0.0, sigma)), 0.0f, 1.0f);
    }
  }
  stack.gt_masks = std::move(masks);

  const double z_noise = normal(rng);
  const auto totals = mask_totals(*stack.gt_masks);
  const TimeModel& tm = cfg.time;
  if (totals.boundary > 0.0) {
    stack.gt_label_time = std::exp(tm.alpha * std::log(totals.boundary) +
                                   tm.beta * std::log(totals.components) +
                                   tm.gamma + tm.noise_sigma * z_noise);
  } else {
    stack.gt_label_time = tm.floor_time * std::exp(tm.noise_sigma * z_noise);
  }
  return stack;
}

}  // namespace detail

// Deterministic in cfg.seed: stack i of split s is drawn from its own stream
// derive_seed(seed, s, i), so adding stacks to one split leaves the others
// unchanged.
inline SyntheticDataset generate_synthetic(const SyntheticConfig& cfg,
                                           int jobs = 1) {
  validate(cfg);
  struct Job {
    Split split;
    std::size_t index;
    bool positive;
  };
  std::vector<Job> jobs_list;
  for (auto [split, n] : {std::pair{Split::kSeedTrainval, cfg.n_trainval},
                          std::pair{Split::kSeedTest, cfg.n_test},
                          std::pair{Split::kPool, cfg.n_pool},
                          std::pair{Split::kPoolTest, cfg.n_pool_test}}) {
    // Exact positive count per split, positions shuffled.
    Rng rng(derive_seed(cfg.seed, std::string("labels_") +
                                      std::string(to_string(split))));
    const std::size_t n_pos = static_cast<std::size_t>(
        std::llround(cfg.positive_fraction * static_cast<double>(n)));
    std::vector<bool> positive(n, false);
    std::fill(positive.begin(), positive.begin() + n_pos, true);
    std::shuffle(positive.begin(), positive.end(), rng);
    for (std::size_t i = 0; i < n; ++i) jobs_list.push_back({split, i, positive[i]});
  }
  SyntheticDataset data;
  data.stacks.resize(jobs_list.size());
  parallel_for(jobs_list.size(), jobs, [&](std::size_t k) {
    const Job& j = jobs_list[k];
    data.stacks[k] = detail::generate_stack(cfg, j.split, j.index, j.positive);
  });
  return data;
}

}  // namespace alcost
