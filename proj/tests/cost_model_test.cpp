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


#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "alcost/cost_model/cost_model.hpp"
#include "alcost/core/random.hpp"

namespace alcost {
namespace {

struct Truth {
  double alpha = 0.8;
  double beta = 0.4;
  double gamma = 2.0;
};

// Draws B log-uniform on [10, 3000] and M in 1..8, then t from the
// log-linear law times lognormal noise.
std::vector<TimeSample> generate(std::size_t n, double sigma, std::uint64_t seed,
                                 Truth truth = {}) {
  Rng rng(seed);
  std::vector<TimeSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = std::exp(uniform(rng, std::log(10.0), std::log(3000.0)));
    const double m = static_cast<double>(1 + rng() % 8);
    const double t = std::exp(truth.alpha * std::log(b) + truth.beta * std::log(m) +
                              truth.gamma + normal(rng, 0.0, sigma));
    out.push_back({b, m, t});
  }
  return out;
}

TEST(CostModel, NoiselessRecoveryIsExact) {
  const auto samples = generate(50, 0.0, 3);
  const auto p = fit_cost_model(samples);
  EXPECT_NEAR(p.alpha, 0.8, 1e-9);
  EXPECT_NEAR(p.beta, 0.4, 1e-9);
  EXPECT_NEAR(p.gamma, 2.0, 1e-9);
  EXPECT_NEAR(p.diagnostics.r2, 1.0, 1e-12);
  for (const auto& s : samples) {
    EXPECT_NEAR(predict_time(p, s.boundary, s.components), s.seconds,
                1e-9 * s.seconds);
  }
}

// Over many seeded fits the standardized errors (estimate - truth) / SE should
// look standard normal: unit variance and a 3-sigma exceedance rate near 0.27%.
TEST(CostModel, StandardErrorsAreCalibrated) {
  const int fits = 400;
  std::array<double, 3> sum_sq{};
  std::array<int, 3> beyond3{};
  for (int k = 0; k < fits; ++k) {
    const auto p = fit_cost_model(generate(200, 0.3, derive_seed(17, "fit", k)));
    const std::array<double, 3> err{p.alpha - 0.8, p.beta - 0.4, p.gamma - 2.0};
    for (int j = 0; j < 3; ++j) {
      const double z = err[j] / p.diagnostics.std_errors[j];
      sum_sq[j] += z * z;
      beyond3[j] += std::abs(z) > 3.0;
    }
    EXPECT_LT(std::abs(p.diagnostics.residual_skewness), 0.5);
    EXPECT_NEAR(p.diagnostics.sigma, 0.3, 0.06);
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(sum_sq[j] / fits, 1.0, 0.2) << "coefficient " << j;
    EXPECT_LE(beyond3[j], 6) << "coefficient " << j;
  }
}

// OLS through a different route: Gram-Schmidt on the centred design.
TEST(CostModel, MatchesIndependentLeastSquares) {
  const auto samples = generate(80, 0.4, 9);
  const std::size_t n = samples.size();
  std::vector<double> x1(n), x2(n), y(n);
  double m1 = 0, m2 = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = std::log(samples[i].boundary);
    x2[i] = std::log(samples[i].components);
    y[i] = std::log(samples[i].seconds);
    m1 += x1[i];
    m2 += x2[i];
    my += y[i];
  }
  m1 /= n;
  m2 /= n;
  my /= n;
  double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x1[i] - m1, b = x2[i] - m2, c = y[i] - my;
    s11 += a * a;
    s12 += a * b;
    s22 += b * b;
    s1y += a * c;
    s2y += b * c;
  }
  const double det = s11 * s22 - s12 * s12;
  const double alpha = (s22 * s1y - s12 * s2y) / det;
  const double beta = (s11 * s2y - s12 * s1y) / det;
  const double gamma = my - alpha * m1 - beta * m2;
  const auto p = fit_cost_model(samples);
  EXPECT_NEAR(p.alpha, alpha, 1e-9);
  EXPECT_NEAR(p.beta, beta, 1e-9);
  EXPECT_NEAR(p.gamma, gamma, 1e-9);
}

TEST(CostModel, ResidualsSumToZeroAndR2MatchesReport) {
  const auto samples = generate(120, 0.5, 4);
  const auto p = fit_cost_model(samples);
  const auto report = diagnostics_report(p, samples);
  double sum = 0.0, rss = 0.0, mean = 0.0;
  for (const auto& r : report.residuals) {
    sum += r.residual;
    rss += r.residual * r.residual;
    mean += r.log_time;
  }
  mean /= samples.size();
  double tss = 0.0;
  for (const auto& r : report.residuals) tss += (r.log_time - mean) * (r.log_time - mean);
  EXPECT_NEAR(sum, 0.0, 1e-9);
  EXPECT_NEAR(report.r2, 1 - rss / tss, 1e-12);
  EXPECT_NEAR(report.r2, p.diagnostics.r2, 1e-12);
  EXPECT_GE(report.r2, 0.0);
  EXPECT_NEAR(report.sigma, p.diagnostics.sigma, 1e-12);
  const std::string csv = to_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 121);
}

TEST(CostModel, ScaleEquivariance) {
  const auto samples = generate(60, 0.3, 5);
  const auto base = fit_cost_model(samples);
  const double c = 7.5;
  auto scaled_t = samples;
  for (auto& s : scaled_t) s.seconds *= c;
  const auto pt = fit_cost_model(scaled_t);
  EXPECT_NEAR(pt.alpha, base.alpha, 1e-9);
  EXPECT_NEAR(pt.beta, base.beta, 1e-9);
  EXPECT_NEAR(pt.gamma, base.gamma + std::log(c), 1e-9);

  auto scaled_b = samples;
  for (auto& s : scaled_b) s.boundary *= c;
  const auto pb = fit_cost_model(scaled_b);
  EXPECT_NEAR(pb.alpha, base.alpha, 1e-9);
  EXPECT_NEAR(pb.beta, base.beta, 1e-9);
  EXPECT_NEAR(pb.gamma, base.gamma - base.alpha * std::log(c), 1e-9);
}

TEST(CostModel, PredictRules) {
  CostModelParams p;
  EXPECT_THROW(predict_time(p, 1, 1), ConfigError);
  p.alpha = 0.8;
  p.beta = 0.4;
  p.gamma = 2.0;
  p.floor_time = 42.0;
  p.fitted = true;
  EXPECT_DOUBLE_EQ(predict_time(p, 1, 1), std::exp(2.0));
  EXPECT_EQ(predict_time(p, 0, 0), 42.0);
  EXPECT_THROW(predict_time(p, 5, 0), DomainError);
  double prev = 0.0;
  for (double b = 1; b < 1000; b *= 1.7) {
    const double t = predict_time(p, b, 2);
    EXPECT_GT(t, prev);
    prev = t;
  }
  EXPECT_GT(predict_time(p, 10, 3), predict_time(p, 10, 2));
}

TEST(CostModel, DegenerateDesignsAreRejected) {
  const std::vector<TimeSample> same(5, TimeSample{10, 2, 100});
  EXPECT_THROW(fit_cost_model(same), FitError);
  EXPECT_THROW(fit_cost_model(std::vector<TimeSample>(2, {10, 2, 100})), FitError);

  std::vector<TimeSample> collinear;
  for (int i = 1; i <= 6; ++i) collinear.push_back({std::pow(2.0, i), std::pow(4.0, i), 10.0 * i});
  try {
    fit_cost_model(collinear);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_NE(std::string(e.what()).find("collinear"), std::string::npos);
  }

  std::vector<TimeSample> const_m;
  for (int i = 1; i <= 6; ++i) const_m.push_back({10.0 * i, 3, 10.0 * i});
  try {
    fit_cost_model(const_m);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_NE(std::string(e.what()).find("log M"), std::string::npos);
  }

  auto bad = generate(10, 0.1, 1);
  bad[3].seconds = 0.0;
  EXPECT_THROW(fit_cost_model(bad), DomainError);
  EXPECT_THROW(fit_cost_model(generate(10, 0.1, 1), 0.0), DomainError);
}

}  // namespace
}  // namespace alcost
