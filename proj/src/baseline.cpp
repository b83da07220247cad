// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "agentvar/error.hpp"

namespace agentvar {

SampleSet rollout_path(const AgentGraph& graph, const Path& path, std::size_t n, SeedDerivation seed,
                       ContextTag tag) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "rollout needs n >= 1");
  const auto edges = graph.path_edges(path);
  std::vector<Value> state(n);
  draw_initial(graph.initial(), derive_key(seed, kInitialStream, tag), state);
  std::vector<double> worst(n, kNegInf);
  std::vector<Value> next(n);
  for (EdgeIndex e : edges) {
    const StreamKey key = derive_key(seed, e, tag);
    const EdgeModel& model = graph.model(e);
    for (std::size_t i = 0; i < n; ++i) {
      SplitMix64 rng = derive_rng(key, i);
      const auto draw = model.sample(state[i], rng);
      worst[i] = std::max(worst[i], model.loss(draw.trace));
      next[i] = draw.output;
    }
    state.swap(next);
  }
  return SampleSet(std::move(worst));
}

VarResult baseline_var(const AgentGraph& graph, const RiskConfig& config, std::size_t path_cap) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  validate(graph);
  const auto paths = enumerate_paths(graph, path_cap);
  const SeedDerivation seed{config.seed};

  VarResult r;
  r.algorithm = Algorithm::kBaseline;
  r.config = config;
  r.estimate = std::numeric_limits<double>::infinity();
  r.per_path.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const ContextTag tag{Context::kBaseline, static_cast<std::uint32_t>(i), 0};
    const SampleSet losses = rollout_path(graph, paths[i], config.samples, seed, tag);
    const double q = empirical_quantile(losses, 1.0 - config.alpha);
    r.per_path.push_back(PathEstimate{paths[i], q, config.samples});
    ++r.diagnostics.quantile_evaluations;
    if (q < r.estimate || r.path.vertices.empty()) {
      r.estimate = q;
      r.path = paths[i];
    }
  }
  r.diagnostics.predicted_quantile_evaluations = paths.size();
  r.diagnostics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace agentvar
