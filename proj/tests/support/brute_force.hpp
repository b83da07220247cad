// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

// Exhaustive reference for the bucket dynamic program: every s->t path times
// every integer allocation of d budget units, evaluated on the same sample
// streams the dynamic program uses. Shares nothing with the library beyond
// the graph, the per-sample draw API and the stream-derivation contract.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "agentvar/graph.hpp"
#include "agentvar/rng.hpp"

namespace agentvar::testing {

struct BruteForceResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<EdgeIndex> edges;
  std::vector<std::size_t> allocation;
};

// Ceiling order statistic, snapping level*n to an integer within 1e-9.
inline double reference_quantile(std::vector<double> xs, double level) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double t = level * n;
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, r)) t = r;
  std::size_t k = static_cast<std::size_t>(std::ceil(t));
  k = std::clamp<std::size_t>(k, 1, xs.size());
  return xs[k - 1];
}

// Objective of one (path, allocation) pair: the max over edges of the
// per-edge empirical quantile at level 1 - a_i alpha / d, each edge drawing
// on the outputs of the previous edge under the same keys as the DP.
inline double evaluate_allocation(const AgentGraph& g, const std::vector<EdgeIndex>& edges,
                                  const std::vector<std::size_t>& alloc, double alpha, std::size_t d,
                                  std::size_t n, std::uint64_t seed, bool memoized) {
  const SeedDerivation sd{seed};
  std::vector<Value> state(n);
  {
    const StreamKey key = derive_key(sd, kInitialStream, ContextTag{Context::kInitial, 0, 0});
    draw_initial(g.initial(), key, state);
  }
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t held = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t target = held + alloc[i];
    const ContextTag tag = memoized ? ContextTag{Context::kBucketMemo, static_cast<std::uint32_t>(held), 0}
                                    : ContextTag{Context::kBucket, static_cast<std::uint32_t>(target),
                                                 static_cast<std::uint32_t>(held)};
    const StreamKey key = derive_key(sd, edges[i], tag);
    const EdgeModel& m = g.model(edges[i]);
    std::vector<double> losses(n);
    std::vector<Value> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      SplitMix64 rng = derive_rng(key, j);
      const auto draw = sample_edge(m, state[j], rng);
      losses[j] = loss_of(m, draw.trace);
      next[j] = draw.output;
    }
    const double level = 1.0 - static_cast<double>(alloc[i]) * alpha / static_cast<double>(d);
    worst = std::max(worst, reference_quantile(std::move(losses), level));
    state.swap(next);
    held = target;
  }
  return worst;
}

// Minimum over paths (lexicographic DFS) and allocations summing to d.
inline BruteForceResult brute_force_min(const AgentGraph& g, double alpha, std::size_t d, std::size_t n,
                                        std::uint64_t seed, bool memoized = false) {
  BruteForceResult best;
  const VertexIndex s = *g.source();
  const VertexIndex t = *g.terminal();

  std::vector<std::vector<EdgeIndex>> paths;
  std::vector<EdgeIndex> stack;
  std::function<void(VertexIndex)> dfs = [&](VertexIndex v) {
    if (v == t) {
      paths.push_back(stack);
      return;
    }
    for (EdgeIndex e : g.out_edges(v)) {
      stack.push_back(e);
      dfs(g.edge_to(e));
      stack.pop_back();
    }
  };
  dfs(s);

  for (const auto& edges : paths) {
    std::vector<std::size_t> alloc(edges.size(), 0);
    std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t left) {
      if (i + 1 == edges.size()) {
        alloc[i] = left;
        const double v = evaluate_allocation(g, edges, alloc, alpha, d, n, seed, memoized);
        if (v < best.value) {
          best.value = v;
          best.edges = edges;
          best.allocation = alloc;
        }
        return;
      }
      for (std::size_t a = 0; a <= left; ++a) {
        alloc[i] = a;
        fill(i + 1, left - a);
      }
    };
    fill(0, d);
  }
  return best;
}

}  // namespace agentvar::testing
