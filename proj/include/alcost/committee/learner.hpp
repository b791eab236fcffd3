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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "alcost/committee/features.hpp"
#include "alcost/core/error.hpp"
#include "alcost/core/grid.hpp"
#include "alcost/core/random.hpp"

namespace alcost {

struct LearnerHyperparams {
  double learning_rate = 0.5;
  std::uint32_t epochs = 6;
  double l2 = 1e-3;
  // Standard deviation of the Gaussian weight initialization.
  double init_scale = 1.0;
  std::uint64_t init_seed = 1;
  std::uint64_t order_seed = 1;
  // Side of the square training patches.
  std::uint32_t patch_size = 32;
  // Pixels drawn (with replacement) from each training patch per update.
  std::uint32_t pixels_per_patch = 128;
  // Probability that a training patch is centred on a foreground pixel, drawn
  // uniformly over all foreground in the training set.
  double lesion_focus = 0.33;

  friend bool operator==(const LearnerHyperparams&,
                         const LearnerHyperparams&) = default;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Logistic regression over the local-hat-v2 feature basis. Satisfies the
// PatchPredictor contract: a square patch in, a same-sized probability grid
// out, deterministic given the weights.
class LinearPatchLearner {
 public:
  LinearPatchLearner() : weights_(kFeatureCount, 0.0) {}
  LinearPatchLearner(std::vector<double> weights, double bias,
                     LearnerHyperparams hyper)
      : weights_(std::move(weights)), bias_(bias), hyper_(hyper) {
    if (weights_.size() != kFeatureCount) {
      throw InvariantError("weight vector length " +
                           std::to_string(weights_.size()) +
                           " does not match feature basis length " +
                           std::to_string(kFeatureCount));
    }
  }

  // Random Gaussian initialization from hyper.init_seed.
  static LinearPatchLearner initialized(const LearnerHyperparams& hyper) {
    Rng rng(derive_seed(hyper.init_seed, "init"));
    std::vector<double> w(kFeatureCount);
    for (double& x : w) x = normal(rng, 0.0, hyper.init_scale);
    return LinearPatchLearner(std::move(w), 0.0, hyper);
  }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const LearnerHyperparams& hyperparams() const { return hyper_; }

  double logit(const FeatureVector& f) const {
    double z = bias_;
    for (std::size_t i = 0; i < kFeatureCount; ++i) z += weights_[i] * f[i];
    return z;
  }

  std::vector<float> predict_patch(std::span<const float> patch,
                                   std::size_t side) const {
    PatchFeatureExtractor extractor(patch, side);
    std::vector<float> out(patch.size());
    FeatureVector f{};
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        extractor.compute(r, c, f);
        out[r * side + c] = static_cast<float>(sigmoid(logit(f)));
      }
    }
    return out;
  }

  // One averaged-gradient step of L2-regularized logistic loss.
  void sgd_step(std::span<const FeatureVector> features,
                std::span<const double> labels) {
    if (features.empty()) return;
    std::vector<double> grad(kFeatureCount, 0.0);
    double grad_bias = 0.0;
    for (std::size_t k = 0; k < features.size(); ++k) {
      const double err = sigmoid(logit(features[k])) - labels[k];
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        grad[i] += err * features[k][i];
      }
      grad_bias += err;
    }
    const double scale = 1.0 / static_cast<double>(features.size());
    const double lr = hyper_.learning_rate;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      weights_[i] -= lr * (grad[i] * scale + hyper_.l2 * weights_[i]);
    }
    bias_ -= lr * grad_bias * scale;
  }

  friend bool operator==(const LinearPatchLearner&,
                         const LinearPatchLearner&) = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  LearnerHyperparams hyper_;
};

// A frame with its ground truth, as seen by the trainer.
struct TrainingFrame {
  const Frame* frame = nullptr;
  const BinaryMask* mask = nullptr;
};

namespace detail {

inline std::vector<std::uint32_t> foreground_indices(const BinaryMask& mask) {
  std::vector<std::uint32_t> out;
  auto bits = mask.values();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace detail

// Trains from a fresh initialization. An epoch takes one patch per training
// frame: with probability lesion_focus it is centred on a foreground pixel
// drawn uniformly from all training frames, otherwise it is a uniform patch of
// the next frame in an order shuffled by hyper.order_seed. The returned weights average the
// iterates of the second half of the epochs, so the result does not hinge on
// which frames happened to come last. Reproducible given
// (init_seed, order_seed) and the frame sequence.
inline LinearPatchLearner train_learner(std::span<const TrainingFrame> frames,
                                        const LearnerHyperparams& hyper) {
  if (frames.empty()) throw ConfigError("no training frames");
  const std::size_t side = hyper.patch_size;
  for (const auto& tf : frames) {
    if (!tf.frame || !tf.mask) throw ConfigError("training frame without mask");
    if (tf.frame->height() < side || tf.frame->width() < side) {
      throw ConfigError("training patch size " + std::to_string(side) +
                        " exceeds frame dimensions");
    }
  }
  LinearPatchLearner learner = LinearPatchLearner::initialized(hyper);
  Rng rng(derive_seed(hyper.order_seed, "order"));

  // Running foreground pixel counts, so a focus centre is uniform over every
  // labelled foreground pixel rather than over frames.
  std::vector<std::vector<std::uint32_t>> foreground(frames.size());
  std::vector<std::size_t> fg_cumulative(frames.size());
  std::size_t fg_total = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    foreground[i] = detail::foreground_indices(*frames[i].mask);
    fg_total += foreground[i].size();
    fg_cumulative[i] = fg_total;
  }

  std::vector<std::size_t> order(frames.size());
  std::vector<float> patch(side * side);
  std::vector<FeatureVector> batch(hyper.pixels_per_patch);
  std::vector<double> labels(hyper.pixels_per_patch);
  const std::uint32_t tail_start = hyper.epochs / 2;
  std::vector<double> weight_sum(kFeatureCount, 0.0);
  double bias_sum = 0.0;
  std::size_t tail_steps = 0;

  for (std::uint32_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t next : order) {
      const bool focus = fg_total > 0 && uniform01(rng) < hyper.lesion_focus;
      std::size_t idx = next;
      std::size_t fg_rank = 0;
      if (focus) {
        fg_rank = std::uniform_int_distribution<std::size_t>(0, fg_total - 1)(rng);
        idx = static_cast<std::size_t>(
            std::upper_bound(fg_cumulative.begin(), fg_cumulative.end(), fg_rank) -
            fg_cumulative.begin());
        fg_rank -= idx == 0 ? 0 : fg_cumulative[idx - 1];
      }
      const Frame& frame = *frames[idx].frame;
      const BinaryMask& mask = *frames[idx].mask;
      const std::size_t h = frame.height();
      const std::size_t w = frame.width();
      std::size_t top = 0;
      std::size_t left = 0;
      if (focus) {
        const std::uint32_t pick = foreground[idx][fg_rank];
        const std::size_t pr = pick / w;
        const std::size_t pc = pick % w;
        const std::size_t off_r =
            std::uniform_int_distribution<std::size_t>(0, side - 1)(rng);
        const std::size_t off_c =
            std::uniform_int_distribution<std::size_t>(0, side - 1)(rng);
        top = std::min(pr >= off_r ? pr - off_r : 0, h - side);
        left = std::min(pc >= off_c ? pc - off_c : 0, w - side);
      } else {
        top = std::uniform_int_distribution<std::size_t>(0, h - side)(rng);
        left = std::uniform_int_distribution<std::size_t>(0, w - side)(rng);
      }
      for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
          patch[r * side + c] = frame(top + r, left + c);
        }
      }
      PatchFeatureExtractor extractor(patch, side);
      for (std::size_t k = 0; k < batch.size(); ++k) {
        const std::size_t r =
            std::uniform_int_distribution<std::size_t>(0, side - 1)(rng);
        const std::size_t c =
            std::uniform_int_distribution<std::size_t>(0, side - 1)(rng);
        extractor.compute(r, c, batch[k]);
        labels[k] = mask(top + r, left + c) ? 1.0 : 0.0;
      }
      learner.sgd_step(batch, labels);
      if (epoch >= tail_start) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          weight_sum[i] += learner.weights()[i];
        }
        bias_sum += learner.bias();
        ++tail_steps;
      }
    }
  }
  const double n = static_cast<double>(tail_steps);
  for (double& x : weight_sum) x /= n;
  return LinearPatchLearner(std::move(weight_sum), bias_sum / n, hyper);
}

}  // namespace alcost
