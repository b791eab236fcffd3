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


#include <cmath>

#include <gtest/gtest.h>

#include "alcost/core/random.hpp"
#include "alcost/selection/selection.hpp"

namespace alcost {
namespace {

std::vector<SelectionItem> make_items(const std::vector<std::pair<double, double>>& vt) {
  std::vector<SelectionItem> items;
  for (std::size_t i = 0; i < vt.size(); ++i) {
    items.push_back({"s" + std::to_string(10 + i), vt[i].first, vt[i].second});
  }
  return items;
}

// Values and times log-uniform over two decades.
std::vector<SelectionItem> random_items(Rng& rng, std::size_t n) {
  std::vector<SelectionItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::exp(uniform(rng, 0.0, std::log(100.0)));
    const double t = std::exp(uniform(rng, std::log(10.0), std::log(1000.0)));
    items.push_back({"id" + std::to_string(100 + i), v, std::round(t)});
  }
  return items;
}

// Best value over all subsets whose integer times fit.
double brute_force(const std::vector<SelectionItem>& items, double budget) {
  double best = 0.0;
  const std::size_t n = items.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double v = 0.0, t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        v += items[i].value;
        t += items[i].time;
      }
    }
    if (t <= budget) best = std::max(best, v);
  }
  return best;
}

double total_time(const std::vector<SelectionItem>& items) {
  double t = 0.0;
  for (const auto& i : items) t += i.time;
  return t;
}

TEST(Knapsack, ThreeItemExample) {
  const auto items = make_items({{3, 4}, {4, 5}, {5, 6}});
  const auto r = knapsack_select(items, {.seconds = 10, .quantum = 1});
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"s10", "s12"}));
  EXPECT_EQ(r.total_value, 8.0);
  EXPECT_EQ(r.total_time, 10.0);
  // Ratio order is s12, s11, s10; s11 no longer fits after s12, s10 does.
  const auto g = greedy_ratio_select(items, {.seconds = 10, .quantum = 1});
  EXPECT_LE(g.total_value, r.total_value);
  EXPECT_EQ(g.total_value, 8.0);
}

TEST(Knapsack, MatchesBruteForce) {
  Rng rng(2718);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 18;
    const auto items = random_items(rng, n);
    const double budget = std::round(uniform(rng, 0.1, 0.7) * total_time(items));
    const auto r = knapsack_select(items, {.seconds = budget, .quantum = 1});
    EXPECT_NEAR(r.total_value, brute_force(items, budget), 1e-9) << "trial " << trial;
    EXPECT_LE(r.total_time, budget);
    const auto g = greedy_ratio_select(items, {.seconds = budget, .quantum = 1});
    EXPECT_LE(g.total_value, r.total_value + 1e-9);
    EXPECT_LE(g.total_time, budget);
  }
}

TEST(Knapsack, CoarseQuantumNeverExceedsBudget) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto items = random_items(rng, 12);
    for (auto& i : items) i.time += uniform01(rng);
    const double budget = uniform(rng, 100, 3000);
    const auto r = knapsack_select(items, {.seconds = budget, .quantum = 7.3});
    EXPECT_LE(r.total_time, budget);
  }
}

TEST(Knapsack, MonotoneInBudget) {
  Rng rng(8);
  const auto items = random_items(rng, 15);
  double prev = -1.0;
  for (double q = 0; q < total_time(items); q += 97) {
    const double v = knapsack_select(items, {.seconds = q, .quantum = 1}).total_value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Knapsack, TiesPreferSmallerIds) {
  const std::vector<SelectionItem> items{{"b", 1, 5}, {"a", 1, 5}, {"c", 1, 5}};
  const auto r = knapsack_select(items, {.seconds = 10, .quantum = 1});
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"a", "b"}));
}

TEST(Knapsack, EdgeCases) {
  const auto items = make_items({{3, 4}, {4, 5}});
  EXPECT_TRUE(knapsack_select(items, {.seconds = 3, .quantum = 1}).chosen.empty());
  EXPECT_TRUE(knapsack_select(items, {.seconds = 0, .quantum = 1}).chosen.empty());
  EXPECT_EQ(knapsack_select(items, {.seconds = 100, .quantum = 1}).chosen.size(), 2u);
  EXPECT_TRUE(knapsack_select({}, {.seconds = 100, .quantum = 1}).chosen.empty());
  EXPECT_THROW(knapsack_select(items, {.seconds = -1, .quantum = 1}), DomainError);
  EXPECT_THROW(knapsack_select(items, {.seconds = 10, .quantum = 0}), DomainError);
  EXPECT_THROW(knapsack_select(make_items({{-1, 3}}), {.seconds = 10}), DomainError);
  EXPECT_THROW(knapsack_select(make_items({{1, 0}}), {.seconds = 10}), DomainError);
  const std::vector<SelectionItem> dup{{"a", 1, 1}, {"a", 2, 2}};
  EXPECT_THROW(knapsack_select(dup, {.seconds = 10}), DomainError);
}

TEST(Knapsack, CapacityCeilingFallsBackToGreedy) {
  const auto items = make_items({{3, 4}, {4, 5}, {5, 6}});
  const Budget tight{.seconds = 1000, .quantum = 1, .max_cells = 100};
  EXPECT_THROW(knapsack_select(items, tight), CapacityError);
  const auto r = select_batch(items, tight, Policy::kKnapsack);
  EXPECT_EQ(r.policy, Policy::kGreedy);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("quantum"), std::string::npos);
  EXPECT_EQ(r.chosen.size(), 3u);
}

TEST(UniformCost, TakesTopValuesAndStopsAtFirstMisfit) {
  const auto equal = make_items({{1, 10}, {5, 10}, {3, 10}, {4, 10}});
  const auto r = uniform_cost_select(equal, {.seconds = 30});
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"s11", "s12", "s13"}));

  const auto first_too_big = make_items({{9, 50}, {1, 1}, {1, 1}});
  EXPECT_TRUE(uniform_cost_select(first_too_big, {.seconds = 30}).chosen.empty());

  // A later item that would fit is not taken after the first misfit.
  const auto stop = make_items({{9, 20}, {8, 20}, {1, 5}});
  EXPECT_EQ(uniform_cost_select(stop, {.seconds = 30}).chosen,
            (std::vector<std::string>{"s10"}));
}

TEST(UniformCost, HeavyTailSelectsFewerThanKnapsack) {
  Rng rng(77);
  std::vector<SelectionItem> items;
  for (int i = 0; i < 60; ++i) {
    // Expensive stacks are also the uncertain ones.
    const double t = std::round(std::exp(uniform(rng, std::log(30.0), std::log(5000.0))));
    items.push_back({"h" + std::to_string(100 + i), std::log(t) + uniform01(rng), t});
  }
  const Budget b{.seconds = 0.1 * total_time(items), .quantum = 1};
  EXPECT_LT(uniform_cost_select(items, b).chosen.size(),
            knapsack_select(items, b).chosen.size());
}

TEST(Random, DeterministicAndFeasible) {
  Rng rng(3);
  const auto items = random_items(rng, 30);
  const Budget b{.seconds = 0.3 * total_time(items)};
  const auto a = random_select(items, b, 11);
  EXPECT_EQ(random_select(items, b, 11).chosen, a.chosen);
  EXPECT_LE(a.total_time, b.seconds);
  EXPECT_NE(random_select(items, b, 12).chosen, a.chosen);
  EXPECT_EQ(random_select(items, {.seconds = total_time(items)}, 5).chosen.size(), 30u);
  EXPECT_TRUE(random_select(items, {.seconds = 1}, 5).chosen.empty());
  // No remaining item fits afterwards.
  for (const auto& i : items) {
    if (std::find(a.chosen.begin(), a.chosen.end(), i.stack_id) == a.chosen.end()) {
      EXPECT_GT(a.total_time + i.time, b.seconds);
    }
  }
}

TEST(Policy, NamesRoundTrip) {
  for (Policy p : {Policy::kKnapsack, Policy::kUniformCost, Policy::kRandom, Policy::kGreedy}) {
    EXPECT_EQ(parse_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_policy("best"), ConfigError);
}

TEST(Selection, ResultsAreSortedUniqueAndFromPool) {
  Rng rng(4);
  const auto items = random_items(rng, 25);
  const Budget b{.seconds = 0.4 * total_time(items)};
  for (Policy p : {Policy::kKnapsack, Policy::kUniformCost, Policy::kRandom, Policy::kGreedy}) {
    const auto r = select_batch(items, b, p, 1);
    EXPECT_TRUE(std::is_sorted(r.chosen.begin(), r.chosen.end()));
    EXPECT_EQ(std::adjacent_find(r.chosen.begin(), r.chosen.end()), r.chosen.end());
    double v = 0.0;
    for (const auto& id : r.chosen) {
      auto it = std::find_if(items.begin(), items.end(),
                             [&](const SelectionItem& i) { return i.stack_id == id; });
      ASSERT_NE(it, items.end());
      v += it->value;
    }
    EXPECT_NEAR(v, r.total_value, 1e-9);
  }
}

}  // namespace
}  // namespace alcost
