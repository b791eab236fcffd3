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

// Budgeted batch selection. Each candidate stack is an item with value V
// (uncertainty) and weight T (predicted labeling seconds); a policy picks a
// subset whose total time fits the budget Q.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alcost/core/error.hpp"
#include "alcost/core/random.hpp"

namespace alcost {

struct SelectionItem {
  std::string stack_id;
  double value = 0.0;  // V >= 0
  double time = 0.0;   // T > 0, seconds
};

struct Budget {
  double seconds = 0.0;
  // DP discretization step; item weights are ceil(T / quantum) and the
  // capacity is floor(Q / quantum).
  double quantum = 1.0;
  // Upper bound on capacity cells (Q / quantum + 1).
  std::uint64_t max_cells = 10'000'000;
};

enum class Policy { kKnapsack, kUniformCost, kRandom, kGreedy };

inline std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::kKnapsack:
      return "knapsack";
    case Policy::kUniformCost:
      return "ual";
    case Policy::kRandom:
      return "random";
    case Policy::kGreedy:
      return "greedy";
  }
  return "knapsack";
}

inline Policy parse_policy(std::string_view text) {
  if (text == "knapsack" || text == "cal") return Policy::kKnapsack;
  if (text == "ual" || text == "uniform") return Policy::kUniformCost;
  if (text == "random") return Policy::kRandom;
  if (text == "greedy") return Policy::kGreedy;
  throw ConfigError("unknown policy '" + std::string(text) + "'");
}

struct SelectionResult {
  // Chosen ids in input (stack id) order.
  std::vector<std::string> chosen;
  double total_value = 0.0;
  double total_time = 0.0;
  Policy policy = Policy::kKnapsack;
  std::vector<std::string> warnings;
};

namespace detail {

inline void validate_items(std::span<const SelectionItem> items) {
  std::set<std::string_view> ids;
  for (const auto& item : items) {
    if (!(item.value >= 0.0) || !std::isfinite(item.value)) {
      throw DomainError("item '" + item.stack_id + "' has invalid value");
    }
    if (!(item.time > 0.0) || !std::isfinite(item.time)) {
      throw DomainError("item '" + item.stack_id +
                        "' must have positive finite time");
    }
    if (!ids.insert(item.stack_id).second) {
      throw DomainError("duplicate item '" + item.stack_id + "'");
    }
  }
}

inline void validate_budget(const Budget& budget) {
  if (!(budget.seconds >= 0.0) || !std::isfinite(budget.seconds)) {
    throw DomainError("budget must be a non-negative number of seconds");
  }
  if (!(budget.quantum > 0.0)) throw DomainError("quantum must be positive");
}

// Indices sorted by stack id, the stable order every policy works in.
inline std::vector<std::size_t> id_order(std::span<const SelectionItem> items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].stack_id < items[b].stack_id;
  });
  return order;
}

// Sums are accumulated in stack-id order.
inline SelectionResult make_result(std::span<const SelectionItem> items,
                                   std::vector<std::size_t> picked,
                                   Policy policy) {
  std::sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
    return items[a].stack_id < items[b].stack_id;
  });
  SelectionResult result;
  result.policy = policy;
  for (std::size_t i : picked) {
    result.chosen.push_back(items[i].stack_id);
    result.total_value += items[i].value;
    result.total_time += items[i].time;
  }
  return result;
}

inline std::uint64_t discrete_weight(double time, double quantum) {
  return static_cast<std::uint64_t>(std::ceil(time / quantum));
}

inline std::uint64_t discrete_capacity(const Budget& budget) {
  return static_cast<std::uint64_t>(std::floor(budget.seconds / budget.quantum));
}

}  // namespace detail

// Exact 0-1 knapsack over the discretized instance. The DP keeps one value
// row over capacities plus one bit per (item, capacity) recording whether the
// item improved that cell; the chosen set is read back from those bits. Items
// are processed in stack-id order and a later item replaces an earlier
// solution only on strict improvement, so ties resolve toward smaller ids.
// Throws CapacityError when Q / quantum exceeds budget.max_cells.
inline SelectionResult knapsack_select(std::span<const SelectionItem> items,
                                       const Budget& budget) {
  detail::validate_items(items);
  detail::validate_budget(budget);
  const double cells = std::floor(budget.seconds / budget.quantum) + 1.0;
  if (cells > static_cast<double>(budget.max_cells)) {
    throw CapacityError("knapsack capacity of " + std::to_string(cells) +
                        " cells exceeds the ceiling of " +
                        std::to_string(budget.max_cells) +
                        "; raise the quantum");
  }
  const std::uint64_t capacity = detail::discrete_capacity(budget);
  const auto order = detail::id_order(items);
  const std::size_t n = order.size();
  const std::size_t width = static_cast<std::size_t>(capacity) + 1;

  std::vector<double> best(width, 0.0);
  std::vector<std::uint64_t> take((n * width + 63) / 64, 0);
  std::vector<std::uint64_t> weight(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SelectionItem& item = items[order[k]];
    const std::uint64_t w = detail::discrete_weight(item.time, budget.quantum);
    weight[k] = w;
    if (w > capacity) continue;
    for (std::uint64_t c = capacity + 1; c-- > w;) {
      const double candidate = best[c - w] + item.value;
      if (candidate > best[c]) {
        best[c] = candidate;
        const std::size_t bit = k * width + static_cast<std::size_t>(c);
        take[bit / 64] |= std::uint64_t{1} << (bit % 64);
      }
    }
  }
  std::vector<std::size_t> picked;
  std::uint64_t c = capacity;
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t bit = k * width + static_cast<std::size_t>(c);
    if (take[bit / 64] >> (bit % 64) & 1) {
      picked.push_back(order[k]);
      c -= weight[k];
    }
  }
  return detail::make_result(items, std::move(picked), Policy::kKnapsack);
}

// Uncertainty-only selection: items by descending value (ties by id), taken
// while the running time fits; selection stops at the first item that does
// not fit.
inline SelectionResult uniform_cost_select(std::span<const SelectionItem> items,
                                           const Budget& budget) {
  detail::validate_items(items);
  detail::validate_budget(budget);
  auto order = detail::id_order(items);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].value > items[b].value;
  });
  std::vector<std::size_t> picked;
  double spent = 0.0;
  for (std::size_t i : order) {
    if (spent + items[i].time > budget.seconds) break;
    spent += items[i].time;
    picked.push_back(i);
  }
  return detail::make_result(items, std::move(picked), Policy::kUniformCost);
}

// Scans a seeded uniform permutation and adds every item that still fits.
inline SelectionResult random_select(std::span<const SelectionItem> items,
                                     const Budget& budget, std::uint64_t seed) {
  detail::validate_items(items);
  detail::validate_budget(budget);
  auto order = detail::id_order(items);
  Rng rng(derive_seed(seed, "random_select"));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> picked;
  double spent = 0.0;
  for (std::size_t i : order) {
    if (spent + items[i].time <= budget.seconds) {
      spent += items[i].time;
      picked.push_back(i);
    }
  }
  return detail::make_result(items, std::move(picked), Policy::kRandom);
}

// Descending V/T, adding every item whose discretized weight still fits the
// discretized capacity. Using the knapsack's own feasibility keeps its value
// a lower bound on the DP optimum.
inline SelectionResult greedy_ratio_select(std::span<const SelectionItem> items,
                                           const Budget& budget) {
  detail::validate_items(items);
  detail::validate_budget(budget);
  auto order = detail::id_order(items);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].value / items[a].time > items[b].value / items[b].time;
  });
  const std::uint64_t capacity = detail::discrete_capacity(budget);
  std::vector<std::size_t> picked;
  std::uint64_t used = 0;
  for (std::size_t i : order) {
    const std::uint64_t w = detail::discrete_weight(items[i].time, budget.quantum);
    if (w <= capacity - used) {
      used += w;
      picked.push_back(i);
    }
  }
  return detail::make_result(items, std::move(picked), Policy::kGreedy);
}

// Policy dispatch. A knapsack that would exceed the cell ceiling falls back
// to the greedy ratio policy and records a warning.
inline SelectionResult select_batch(std::span<const SelectionItem> items,
                                    const Budget& budget, Policy policy,
                                    std::uint64_t seed = 0) {
  switch (policy) {
    case Policy::kKnapsack:
      try {
        return knapsack_select(items, budget);
      } catch (const CapacityError& e) {
        SelectionResult r = greedy_ratio_select(items, budget);
        r.warnings.push_back(std::string("knapsack fell back to greedy: ") +
                             e.what());
        return r;
      }
    case Policy::kUniformCost:
      return uniform_cost_select(items, budget);
    case Policy::kRandom:
      return random_select(items, budget, seed);
    case Policy::kGreedy:
      return greedy_ratio_select(items, budget);
  }
  throw ConfigError("unknown policy");
}

}  // namespace alcost
