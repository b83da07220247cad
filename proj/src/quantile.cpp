// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agentvar/error.hpp"

namespace agentvar {

SampleSet::SampleSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kEmptySamples, "sample set is empty");
  for (double v : values_) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvalidParams, "sample set entries must be finite or -inf");
    }
  }
}

std::size_t order_statistic_rank(std::size_t n, double level) {
  level = std::clamp(level, 0.0, 1.0);
  double t = level * static_cast<double>(n);
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, r)) t = r;
  const auto k = static_cast<std::size_t>(std::ceil(t));
  return std::clamp<std::size_t>(k, 1, n);
}

double select_quantile(std::span<double> scratch, double level) {
  if (scratch.empty()) throw Error(ErrorCode::kEmptySamples, "quantile of an empty sample");
  const std::size_t k = order_statistic_rank(scratch.size(), level);
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

double empirical_quantile(std::span<const double> samples, double level) {
  std::vector<double> scratch(samples.begin(), samples.end());
  return select_quantile(scratch, level);
}

double empirical_quantile(const SampleSet& samples, double level) {
  return empirical_quantile(samples.values(), level);
}

double sorted_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptySamples, "quantile of an empty sample");
  return sorted[order_statistic_rank(sorted.size(), level) - 1];
}

double empirical_cdf(std::span<const double> samples, double x) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySamples, "cdf of an empty sample");
  const auto below = std::count_if(samples.begin(), samples.end(), [x](double v) { return v <= x; });
  return static_cast<double>(below) / static_cast<double>(samples.size());
}

double dkw_gamma(std::size_t num_vertices, std::size_t n, std::size_t d, double delta) {
  if (num_vertices < 1 || n < 1 || d < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "dkw_gamma needs |V| >= 1, n >= 1, d >= 1, delta in (0,1)");
  }
  const double v = static_cast<double>(num_vertices);
  const double cells = static_cast<double>(d + 1) * static_cast<double>(d + 1) * v * v;
  return v * std::sqrt(std::log(2.0 * cells / delta) / (2.0 * static_cast<double>(n)));
}

namespace {

double log_pmf(std::size_t i, std::size_t n, double log_p, double log_q) {
  const double ni = static_cast<double>(n);
  const double ii = static_cast<double>(i);
  return std::lgamma(ni + 1) - std::lgamma(ii + 1) - std::lgamma(ni - ii + 1) + ii * log_p + (ni - ii) * log_q;
}

/// Sum of pmf over [lo, hi] (inclusive) with p strictly inside (0, 1).
double pmf_sum(std::size_t lo, std::size_t hi, std::size_t n, double p) {
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  // The pmf is unimodal with mode near n*p; start from the largest term.
  const auto mode = static_cast<std::size_t>(std::floor(static_cast<double>(n + 1) * p));
  const std::size_t peak = std::clamp(mode, lo, hi);
  const double top = log_pmf(peak, n, log_p, log_q);
  double sum = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double term = std::exp(log_pmf(i, n, log_p, log_q) - top);
    sum += term;
  }
  return std::min(1.0, sum * std::exp(top));
}

}  // namespace

double binomial_upper_tail(std::size_t k, std::size_t n, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return pmf_sum(k, n, n, p);
}

double binomial_lower_tail(std::size_t k, std::size_t n, double p) {
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return pmf_sum(0, k, n, p);
}

std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials, double confidence) {
  if (trials < 1 || successes > trials || !(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "clopper_pearson needs 0 <= k <= N, N >= 1, confidence in (0,1)");
  }
  const double tail = (1.0 - confidence) / 2.0;
  const double phat = static_cast<double>(successes) / static_cast<double>(trials);
  constexpr double kTol = 1e-9;

  double lo = 0.0;
  if (successes > 0) {
    double a = 0.0;
    double b = phat;
    while (b - a > kTol) {
      const double m = 0.5 * (a + b);
      if (binomial_upper_tail(successes, trials, m) <= tail) a = m; else b = m;
    }
    lo = a;
  }
  double hi = 1.0;
  if (successes < trials) {
    double a = phat;
    double b = 1.0;
    while (b - a > kTol) {
      const double m = 0.5 * (a + b);
      if (binomial_lower_tail(successes, trials, m) <= tail) b = m; else a = m;
    }
    hi = b;
  }
  return {lo, hi};
}

TheoremBounds theorem_bounds(std::size_t num_vertices, std::size_t n, std::size_t d, double alpha, double delta) {
  TheoremBounds b;
  b.gamma = dkw_gamma(num_vertices, n, d, delta);
  b.delta = delta;
  b.lower_level = std::clamp(1.0 - alpha - b.gamma, 0.0, 1.0);
  b.upper_level = std::clamp(1.0 - alpha + alpha * alpha / 2.0, 0.0, 1.0);
  return b;
}

}  // namespace agentvar
