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

#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

// What a selection policy may see of a pool stack: identity and pixels.
struct UnlabeledStack {
  std::string id;
  std::span<const Frame> frames;
};

// Holds the hidden annotations of a pool. Masks and times of a stack become
// reachable only through reveal(), which is logged; the aggregate pool time
// (used to size budgets) is the only other thing exposed.
class LabelOracle {
 public:
  explicit LabelOracle(std::span<const Stack* const> pool) {
    for (const Stack* s : pool) {
      if (!s->gt_masks || !s->gt_label_time) {
        throw ConfigError("pool stack '" + s->id +
                          "' lacks hidden masks or time");
      }
      hidden_.emplace(s->id, s);
      total_time_ += *s->gt_label_time;
    }
    for (const Stack* s : pool) {
      unlabeled_.push_back({s->id, std::span<const Frame>(s->frames)});
    }
  }

  // Stacks not yet revealed, in pool order.
  std::vector<UnlabeledStack> unlabeled() const {
    std::lock_guard lock(mutex_);
    std::vector<UnlabeledStack> out;
    for (const auto& u : unlabeled_) {
      if (!revealed_.contains(u.id)) out.push_back(u);
    }
    return out;
  }

  std::size_t remaining() const {
    std::lock_guard lock(mutex_);
    return unlabeled_.size() - revealed_.size();
  }

  double total_time() const { return total_time_; }

  // Hands over the annotated stack. Each stack can be revealed once.
  const Stack& reveal(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = hidden_.find(id);
    if (it == hidden_.end()) throw ConfigError("unknown pool stack '" + id + "'");
    if (!revealed_.emplace(id, it->second).second) {
      throw ConfigError("pool stack '" + id + "' was already revealed");
    }
    log_.push_back(id);
    return *it->second;
  }

  const std::vector<std::string>& reveal_log() const { return log_; }

 private:
  std::map<std::string, const Stack*> hidden_;
  std::map<std::string, const Stack*> revealed_;
  std::vector<UnlabeledStack> unlabeled_;
  std::vector<std::string> log_;
  double total_time_ = 0.0;
  mutable std::mutex mutex_;
};

}  // namespace alcost
