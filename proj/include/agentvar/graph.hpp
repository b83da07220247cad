// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "agentvar/agent.hpp"

namespace agentvar {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct EdgeDecl {
  std::string from;
  std::string to;
  AgentSpec agent;
};

/// A source-to-terminal composition, as the vertex sequence s = v1 ... v_{m+1}.
struct Path {
  std::vector<std::string> vertices;

  std::size_t edge_count() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Agent graph. Vertices are indexed in lexicographic id order; edges are
/// indexed in (from, to) order of those indices. Immutable after construction.
///
/// The constructor rejects malformed input (unknown endpoints, duplicate ids,
/// multi-edges, invalid agent parameters). Structural invariants such as
/// acyclicity are left to validate() so a caller can inspect bad graphs.
class AgentGraph {
 public:
  AgentGraph(std::vector<std::string> vertices, std::vector<EdgeDecl> edges, std::string source,
             std::string terminal, InitialSpec initial = {});

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& vertex_ids() const noexcept { return ids_; }
  const std::string& id(VertexIndex v) const { return ids_.at(v); }
  std::optional<VertexIndex> find(const std::string& id) const;
  VertexIndex index_of(const std::string& id) const;

  const std::string& source_id() const noexcept { return source_; }
  const std::string& terminal_id() const noexcept { return terminal_; }
  std::optional<VertexIndex> source() const { return find(source_); }
  std::optional<VertexIndex> terminal() const { return find(terminal_); }

  VertexIndex edge_from(EdgeIndex e) const { return edges_.at(e).from; }
  VertexIndex edge_to(EdgeIndex e) const { return edges_.at(e).to; }
  const EdgeModel& model(EdgeIndex e) const { return edges_.at(e).model; }
  std::optional<EdgeIndex> edge_between(VertexIndex from, VertexIndex to) const;

  /// Incoming / outgoing edge indices, ordered by the neighbour's id.
  const std::vector<EdgeIndex>& in_edges(VertexIndex v) const { return in_.at(v); }
  const std::vector<EdgeIndex>& out_edges(VertexIndex v) const { return out_.at(v); }

  const InitialSpec& initial() const noexcept { return initial_; }

  /// Edge indices of a path; throws NotAPath if consecutive vertices are not
  /// joined by an edge or the path does not run from source to terminal.
  std::vector<EdgeIndex> path_edges(const Path& path) const;

  /// Declarations in canonical order, for serialization.
  std::vector<EdgeDecl> edge_decls() const;

 private:
  struct EdgeRec {
    VertexIndex from;
    VertexIndex to;
    EdgeModel model;
  };

  std::vector<std::string> ids_;
  std::vector<EdgeRec> edges_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::string source_;
  std::string terminal_;
  InitialSpec initial_;
};

/// Throws the first violated invariant: MissingSourceOrTerminal, CycleDetected,
/// UnreachableVertex, DeadEndVertex (in that order).
void validate(const AgentGraph& graph);

/// Kahn order of V \ {s}; ties go to the smaller vertex id.
std::vector<VertexIndex> topological_order(const AgentGraph& graph);

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// All s->t paths in lexicographic vertex-id order. Throws
/// PathBudgetExceeded when more than `cap` paths exist.
std::vector<Path> enumerate_paths(const AgentGraph& graph, std::size_t cap = kDefaultPathCap);

/// Number of s->t paths, saturating at SIZE_MAX.
std::size_t count_paths(const AgentGraph& graph);

}  // namespace agentvar
