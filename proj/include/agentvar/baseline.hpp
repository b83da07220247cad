// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "agentvar/config.hpp"
#include "agentvar/graph.hpp"
#include "agentvar/quantile.hpp"
#include "agentvar/result.hpp"
#include "agentvar/rng.hpp"

namespace agentvar {

/// n end-to-end runs of `path`: x ~ D_s, then each agent in turn on the
/// previous output. Run i uses stream (edge, tag, i) for every edge, so the
/// runs are independent of each other and of the evaluation order. Each
/// entry is the maximum edge loss of one run.
SampleSet rollout_path(const AgentGraph& graph, const Path& path, std::size_t n, SeedDerivation seed,
                       ContextTag tag);

/// Exhaustive estimator: for each s->t path (fresh rollouts per path), the
/// empirical (1 - alpha)-quantile of n path losses; returns the minimiser.
/// Ties go to the first path in enumeration order. `per_path` is filled.
VarResult baseline_var(const AgentGraph& graph, const RiskConfig& config, std::size_t path_cap = kDefaultPathCap);

}  // namespace agentvar
