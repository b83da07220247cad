// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agentvar/config.hpp"
#include "agentvar/graph.hpp"
#include "agentvar/result.hpp"

namespace agentvar {

struct BucketedOptions {
  /// Reuse one batch of edge draws per (edge, predecessor bucket) across all
  /// target buckets. Faster, and makes each row monotone in the bucket, but
  /// changes which draws feed which quantile. Off by default.
  bool memoize_draws = false;
  /// Worker threads for the cells of one vertex. Results do not depend on it.
  unsigned threads = 1;
};

/// The (vertex, bucket) table of the risk-budget dynamic program. Buckets are
/// integers 0..d standing for multiples of alpha / d.
class BucketTable {
 public:
  struct Parent {
    EdgeIndex edge;
    std::size_t bucket;
  };

  BucketTable(std::size_t vertices, std::size_t buckets, VertexIndex source);

  std::size_t buckets() const noexcept { return buckets_; }
  VertexIndex source() const noexcept { return source_; }

  double var(VertexIndex v, std::size_t b) const { return var_.at(v * (buckets_ + 1) + b); }
  const std::optional<Parent>& parent(VertexIndex v, std::size_t b) const {
    return parent_.at(v * (buckets_ + 1) + b);
  }

  void set(VertexIndex v, std::size_t b, double value, std::optional<Parent> parent);

  /// Best partial path to (v, b), starting at the source.
  Path path_to(const AgentGraph& graph, VertexIndex v, std::size_t b) const;
  /// Budget units per edge of path_to(v, b); sums to b.
  std::vector<std::size_t> allocation_to(const AgentGraph& graph, VertexIndex v, std::size_t b) const;

  std::size_t quantile_evaluations = 0;
  std::size_t cells = 0;

 private:
  std::size_t buckets_;
  VertexIndex source_;
  std::vector<double> var_;
  std::vector<std::optional<Parent>> parent_;
};

/// Runs the dynamic program and returns the full table.
///
/// Each cell (v, b) minimises, over predecessor edges (u, v) and budgets
/// b' <= b held at u, the value max(var(u, b'), edge quantile) where the edge
/// quantile is the empirical (1 - (b - b') alpha / d)-quantile of fresh edge
/// losses drawn on the outputs stored at (u, b'). The outputs of the winning
/// draw are stored for (v, b). Out of the source only b' = 0 is considered,
/// so every stored allocation sums to its bucket.
///
/// Ties keep the first candidate in (predecessor id, b') order.
BucketTable build_bucket_table(const AgentGraph& graph, const RiskConfig& config,
                               const BucketedOptions& options = {});

VarResult bucketed_var(const AgentGraph& graph, const RiskConfig& config, const BucketedOptions& options = {});

/// Number of quantile evaluations the loop structure performs.
std::size_t predicted_quantile_evaluations(const AgentGraph& graph, std::size_t buckets);

/// "16ᾱ, 0ᾱ, 10ᾱ (ᾱ=0.001)". Throws NotAPath for an empty path or a result
/// without an allocation.
std::string report_allocation(const VarResult& result);

}  // namespace agentvar
