// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace agentvar {

/// Multiset of losses. Entries may be -inf but never +inf or NaN.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// 1-based rank of the ceiling order statistic, max(1, ceil(level * n)).
/// Products within 1e-9 (relative) of an integer are snapped to it so that
/// levels such as 1 - 3 * 0.1 / 10 do not pick up a spurious extra rank.
std::size_t order_statistic_rank(std::size_t n, double level);

/// k-th smallest value with k = order_statistic_rank(n, level). Level 1 gives
/// the maximum, level 0 the minimum. Throws EmptySamples on empty input.
double empirical_quantile(std::span<const double> samples, double level);
double empirical_quantile(const SampleSet& samples, double level);

/// As empirical_quantile, but reorders `scratch` in place (nth_element).
double select_quantile(std::span<double> scratch, double level);

/// Quantile of an already ascending-sorted sample.
double sorted_quantile(std::span<const double> sorted, double level);

/// Fraction of samples <= x.
double empirical_cdf(std::span<const double> samples, double x);

/// gamma = |V| sqrt( ln(2 (d+1)^2 |V|^2 / delta) / (2n) ), the uniform
/// deviation allowance behind the coverage floor 1 - alpha - gamma.
double dkw_gamma(std::size_t num_vertices, std::size_t n, std::size_t d, double delta);

/// Exact (Clopper-Pearson) two-sided binomial interval for `successes` out of
/// `trials`, found by bisection on the binomial tails to 1e-9.
std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials, double confidence = 0.95);

/// P[X >= k] for X ~ Binomial(n, p).
double binomial_upper_tail(std::size_t k, std::size_t n, double p);
/// P[X <= k] for X ~ Binomial(n, p).
double binomial_lower_tail(std::size_t k, std::size_t n, double p);

struct TheoremBounds {
  double gamma = 0.0;
  double delta = 0.05;
  double lower_level = 0.0;  // 1 - alpha - gamma, clamped to [0, 1]
  double upper_level = 1.0;  // 1 - alpha + alpha^2 / 2, clamped to [0, 1]
};

TheoremBounds theorem_bounds(std::size_t num_vertices, std::size_t n, std::size_t d, double alpha, double delta);

}  // namespace agentvar
