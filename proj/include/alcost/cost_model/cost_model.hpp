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

// Log-linear labeling-time model
//
//   ln t = alpha * ln B + beta * ln M + gamma
//
// where B is the mask boundary length and M the connected-component count of
// a stack. Fitted by ordinary least squares in log space.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alcost/core/error.hpp"
#include "alcost/morphology/stack_features.hpp"

namespace alcost {

inline constexpr double kDefaultFloorTime = 60.0;
inline constexpr double kMaxNormalCondition = 1e8;

struct TimeSample {
  double boundary = 0.0;    // B > 0
  double components = 0.0;  // M > 0
  double seconds = 0.0;     // t > 0
};

struct CostFitDiagnostics {
  // Joint R^2 of the fit and of the single-feature regressions on ln B and
  // on ln M.
  double r2 = 0.0;
  double r2_log_boundary = 0.0;
  double r2_log_components = 0.0;
  // Residual standard deviation in log space (n - 3 degrees of freedom).
  double sigma = 0.0;
  double residual_skewness = 0.0;
  // Standard errors of (alpha, beta, gamma).
  std::array<double, 3> std_errors{};
  double condition = 0.0;
  std::size_t n = 0;
};

struct CostModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  // Predicted time for stacks with no predicted foreground.
  double floor_time = kDefaultFloorTime;
  CostFitDiagnostics diagnostics;
  bool fitted = false;
};

namespace detail {

inline double r_squared(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy * sxy / (sxx * syy);
}

inline double variance(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

}  // namespace detail

// Solves the 3x3 normal equations. Throws DomainError on non-positive
// samples and FitError when fewer than 3 samples are given or the normal
// matrix condition number exceeds kMaxNormalCondition.
inline CostModelParams fit_cost_model(std::span<const TimeSample> samples,
                                      double floor_time = kDefaultFloorTime) {
  if (samples.size() < 3) {
    throw FitError("cost model needs at least 3 samples, got " +
                   std::to_string(samples.size()));
  }
  if (!(floor_time > 0.0)) throw DomainError("floor_time must be positive");
  const std::size_t n = samples.size();
  std::vector<double> lb(n), lm(n), lt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (!(s.boundary > 0.0 && s.components > 0.0 && s.seconds > 0.0)) {
      throw DomainError("time sample " + std::to_string(i) +
                        " has a non-positive field");
    }
    lb[i] = std::log(s.boundary);
    lm[i] = std::log(s.components);
    lt[i] = std::log(s.seconds);
  }

  Eigen::Matrix3d xtx = Eigen::Matrix3d::Zero();
  Eigen::Vector3d xty = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d x(lb[i], lm[i], 1.0);
    xtx += x * x.transpose();
    xty += x * lt[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(xtx);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double condition =
      lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxNormalCondition)) {
    const double tol = 1e-12;
    std::string culprit;
    if (detail::variance(lb) <= tol) {
      culprit = "log B is constant across samples (collinear with intercept)";
    } else if (detail::variance(lm) <= tol) {
      culprit = "log M is constant across samples (collinear with intercept)";
    } else {
      culprit = "log M is collinear with log B";
    }
    std::ostringstream msg;
    msg << "rank-deficient design: " << culprit << " (condition " << condition
        << ")";
    throw FitError(msg.str());
  }
  const Eigen::Vector3d coef = xtx.ldlt().solve(xty);

  CostModelParams params;
  params.alpha = coef[0];
  params.beta = coef[1];
  params.gamma = coef[2];
  params.floor_time = floor_time;
  params.fitted = true;

  auto& d = params.diagnostics;
  d.n = n;
  d.condition = condition;
  double rss = 0.0, mean_t = 0.0;
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    resid[i] = lt[i] - (coef[0] * lb[i] + coef[1] * lm[i] + coef[2]);
    rss += resid[i] * resid[i];
    mean_t += lt[i];
  }
  mean_t /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : lt) tss += (v - mean_t) * (v - mean_t);
  d.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  d.r2_log_boundary = detail::r_squared(lb, lt);
  d.r2_log_components = detail::r_squared(lm, lt);
  const double dof = static_cast<double>(n) - 3.0;
  const double s2 = dof > 0.0 ? rss / dof : 0.0;
  d.sigma = std::sqrt(s2);
  const Eigen::Matrix3d cov = s2 * xtx.inverse();
  for (int j = 0; j < 3; ++j) d.std_errors[j] = std::sqrt(std::max(0.0, cov(j, j)));
  double m2 = 0.0, m3 = 0.0, mr = 0.0;
  for (double r : resid) mr += r;
  mr /= static_cast<double>(n);
  for (double r : resid) {
    m2 += (r - mr) * (r - mr);
    m3 += (r - mr) * (r - mr) * (r - mr);
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  d.residual_skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return params;
}

// exp(alpha ln B + beta ln M + gamma) when both features are positive;
// floor_time for a featureless stack.
inline double predict_time(const CostModelParams& params, double boundary,
                           double components) {
  if (!params.fitted) throw ConfigError("cost model is not fitted");
  if (boundary == 0.0 && components == 0.0) return params.floor_time;
  if (!(boundary > 0.0 && components > 0.0)) {
    throw DomainError("features must both be positive or both zero");
  }
  return std::exp(params.alpha * std::log(boundary) +
                  params.beta * std::log(components) + params.gamma);
}

inline double predict_time(const CostModelParams& params,
                           const StackFeatures& features) {
  return predict_time(params, features.boundary, features.components);
}

struct CostResidual {
  double log_boundary = 0.0;
  double log_components = 0.0;
  double log_time = 0.0;
  double log_predicted = 0.0;
  double residual = 0.0;
};

struct CostDiagnosticsReport {
  std::vector<CostResidual> residuals;
  double r2 = 0.0;
  double sigma = 0.0;
};

// Residuals of `samples` under `params`; R^2 is against the mean-only model,
// sigma uses n - 3 degrees of freedom when n > 3.
inline CostDiagnosticsReport diagnostics_report(
    const CostModelParams& params, std::span<const TimeSample> samples) {
  if (!params.fitted) throw ConfigError("cost model is not fitted");
  CostDiagnosticsReport report;
  double mean = 0.0;
  for (const auto& s : samples) {
    CostResidual r;
    r.log_boundary = std::log(s.boundary);
    r.log_components = std::log(s.components);
    r.log_time = std::log(s.seconds);
    r.log_predicted = params.alpha * r.log_boundary +
                      params.beta * r.log_components + params.gamma;
    r.residual = r.log_time - r.log_predicted;
    mean += r.log_time;
    report.residuals.push_back(r);
  }
  if (samples.empty()) return report;
  mean /= static_cast<double>(samples.size());
  double rss = 0.0, tss = 0.0;
  for (const auto& r : report.residuals) {
    rss += r.residual * r.residual;
    tss += (r.log_time - mean) * (r.log_time - mean);
  }
  report.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  const double dof = static_cast<double>(samples.size()) -
                     (samples.size() > 3 ? 3.0 : 0.0);
  report.sigma = std::sqrt(rss / dof);
  return report;
}

inline std::string to_csv(const CostDiagnosticsReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "log_B,log_M,log_t,log_t_pred,residual\n";
  for (const auto& r : report.residuals) {
    out << r.log_boundary << "," << r.log_components << "," << r.log_time
        << "," << r.log_predicted << "," << r.residual << "\n";
  }
  return out.str();
}

}  // namespace alcost
