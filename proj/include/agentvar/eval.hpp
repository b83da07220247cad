// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "agentvar/config.hpp"
#include "agentvar/graph.hpp"
#include "agentvar/result.hpp"

namespace agentvar {

struct TheoremVerdicts {
  double gamma = 0.0;
  /// Analytic (1 - alpha - gamma)-quantile of the returned path.
  double thm1_threshold = 0.0;
  bool thm1_lower_ok = false;
  /// Analytic minimiser of VaR_alpha over all paths, and its VaR_alpha.
  Path optimal_path;
  double optimal_var = 0.0;
  /// Analytic (1 - alpha + alpha^2/2)-quantile of the optimal path plus slack.
  double thm2_ceiling = 0.0;
  double slack = 0.0;
  bool thm2_upper_ok = false;
};

struct CoverageReport {
  double estimate = 0.0;
  Path path;
  std::size_t samples = 0;
  std::size_t covered = 0;
  double coverage = 0.0;
  std::pair<double, double> ci{0.0, 1.0};
  double target = 0.0;
  std::optional<TheoremVerdicts> verdicts;
};

/// Fraction of N fresh path losses <= q, with a 95% Clopper-Pearson interval.
/// Draws use the coverage context, disjoint from every estimation stream.
CoverageReport coverage(const AgentGraph& graph, const Path& path, double q, std::size_t n, std::uint64_t seed,
                        double alpha);

/// Closed-form loss laws for the analytic agent kinds.
///
/// The CDF of a path loss is the product of per-edge CDFs. Latent-correlated
/// followers are handled at the two ends of the range: rho = 0 is an
/// independent factor; rho = 1 makes the follower comonotone with the latest
/// latent source on the path, and the pair contributes min(F_source,
/// F_follower). Empirical agents, cumulative losses and 0 < rho < 1 raise
/// UnsupportedEdgeKind.
class AnalyticOracle {
 public:
  explicit AnalyticOracle(AgentGraph graph);

  const AgentGraph& graph() const noexcept { return graph_; }

  /// Marginal CDF and quantile of one edge's loss.
  double edge_cdf(EdgeIndex e, double x) const;
  double edge_quantile(EdgeIndex e, double level) const;

  /// P[max loss along path <= x].
  double path_cdf(const Path& path, double x) const;

  bool supports(const Path& path) const;

  /// See analytic_var.
  double var(const Path& path, double level) const;

 private:
  struct Group {
    std::vector<EdgeIndex> members;
  };
  std::vector<Group> groups(const Path& path) const;

  AgentGraph graph_;
};

/// Smallest x with path_cdf(x) >= level, by bisection to 1e-10 on a bracket
/// built from per-edge quantiles. Level 0 gives -inf.
double analytic_var(const AnalyticOracle& oracle, const Path& path, double level);

/// Both coverage-guarantee checks for a result against the oracle.
TheoremVerdicts theorem_verdicts(const VarResult& result, const AnalyticOracle& oracle, const RiskConfig& config);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace agentvar
