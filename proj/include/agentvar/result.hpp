// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "agentvar/config.hpp"
#include "agentvar/graph.hpp"

namespace agentvar {

enum class Algorithm { kBucketed, kBaseline };

std::string_view to_string(Algorithm a);

/// Empirical (1 - alpha)-quantile of n max-loss rollouts along one path.
struct PathEstimate {
  Path path;
  double q = 0.0;
  std::size_t n = 0;
};

struct Diagnostics {
  std::size_t cells = 0;
  std::size_t quantile_evaluations = 0;
  std::size_t predicted_quantile_evaluations = 0;
  double wall_seconds = 0.0;
};

struct VarResult {
  Algorithm algorithm = Algorithm::kBucketed;
  double estimate = 0.0;
  Path path;
  /// Per-edge budget in units of alpha / d; absent for the baseline.
  std::optional<std::vector<std::size_t>> allocation;
  RiskConfig config;
  bool memoized_draws = false;
  Diagnostics diagnostics;
  /// Baseline only: every path's estimate in enumeration order.
  std::vector<PathEstimate> per_path;
};

}  // namespace agentvar
