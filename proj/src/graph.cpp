// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include "agentvar/error.hpp"

namespace agentvar {

AgentGraph::AgentGraph(std::vector<std::string> vertices, std::vector<EdgeDecl> edges, std::string source,
                       std::string terminal, InitialSpec initial)
    : ids_(std::move(vertices)),
      source_(std::move(source)),
      terminal_(std::move(terminal)),
      initial_(std::move(initial)) {
  std::sort(ids_.begin(), ids_.end());
  if (auto dup = std::adjacent_find(ids_.begin(), ids_.end()); dup != ids_.end()) {
    throw Error(ErrorCode::kInvalidGraph, "duplicate vertex id '" + *dup + "'", *dup);
  }
  check_initial(initial_);

  edges_.reserve(edges.size());
  for (auto& decl : edges) {
    auto from = find(decl.from);
    auto to = find(decl.to);
    if (!from || !to) {
      const std::string& bad = from ? decl.to : decl.from;
      throw Error(ErrorCode::kInvalidGraph, "edge " + decl.from + "->" + decl.to + " names unknown vertex '" + bad + "'",
                  bad);
    }
    edges_.push_back(EdgeRec{*from, *to, EdgeModel(std::move(decl.agent))});
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].from == edges_[i - 1].from && edges_[i].to == edges_[i - 1].to) {
      const std::string label = ids_[edges_[i].from] + "->" + ids_[edges_[i].to];
      throw Error(ErrorCode::kInvalidGraph, "multiple edges " + label, label);
    }
  }

  in_.assign(ids_.size(), {});
  out_.assign(ids_.size(), {});
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    out_[edges_[e].from].push_back(e);
    in_[edges_[e].to].push_back(e);
  }
}

std::optional<VertexIndex> AgentGraph::find(const std::string& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<VertexIndex>(it - ids_.begin());
}

VertexIndex AgentGraph::index_of(const std::string& id) const {
  auto v = find(id);
  if (!v) throw Error(ErrorCode::kInvalidGraph, "unknown vertex '" + id + "'", id);
  return *v;
}

std::optional<EdgeIndex> AgentGraph::edge_between(VertexIndex from, VertexIndex to) const {
  for (EdgeIndex e : out_.at(from)) {
    if (edges_[e].to == to) return e;
  }
  return std::nullopt;
}

std::vector<EdgeIndex> AgentGraph::path_edges(const Path& path) const {
  if (path.vertices.size() < 2) throw Error(ErrorCode::kNotAPath, "path has no edges");
  if (path.vertices.front() != source_ || path.vertices.back() != terminal_) {
    throw Error(ErrorCode::kNotAPath, "path must run from " + source_ + " to " + terminal_);
  }
  std::vector<EdgeIndex> out;
  out.reserve(path.vertices.size() - 1);
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    auto u = find(path.vertices[i]);
    auto v = find(path.vertices[i + 1]);
    std::optional<EdgeIndex> e;
    if (u && v) e = edge_between(*u, *v);
    if (!e) {
      const std::string label = path.vertices[i] + "->" + path.vertices[i + 1];
      throw Error(ErrorCode::kNotAPath, "no edge " + label, label);
    }
    out.push_back(*e);
  }
  return out;
}

std::vector<EdgeDecl> AgentGraph::edge_decls() const {
  std::vector<EdgeDecl> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(EdgeDecl{ids_[e.from], ids_[e.to], e.model.spec()});
  return out;
}

namespace {

/// Returns the edges of some directed cycle, or an empty vector.
std::vector<EdgeIndex> find_cycle(const AgentGraph& g) {
  enum class Color : unsigned char { kWhite, kGrey, kBlack };
  const std::size_t n = g.vertex_count();
  std::vector<Color> color(n, Color::kWhite);
  std::vector<EdgeIndex> via(n, 0);
  struct Frame {
    VertexIndex v;
    std::size_t next;
  };
  for (VertexIndex root = 0; root < n; ++root) {
    if (color[root] != Color::kWhite) continue;
    std::vector<Frame> stack{{root, 0}};
    color[root] = Color::kGrey;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& outs = g.out_edges(f.v);
      if (f.next == outs.size()) {
        color[f.v] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      const EdgeIndex e = outs[f.next++];
      const VertexIndex w = g.edge_to(e);
      if (color[w] == Color::kGrey) {
        std::vector<EdgeIndex> cycle{e};
        for (VertexIndex x = f.v; x != w; x = g.edge_from(via[x])) cycle.push_back(via[x]);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[w] == Color::kWhite) {
        color[w] = Color::kGrey;
        via[w] = e;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

std::vector<bool> reach(const AgentGraph& g, VertexIndex start, bool forward) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<VertexIndex> todo{start};
  seen[start] = true;
  while (!todo.empty()) {
    const VertexIndex v = todo.back();
    todo.pop_back();
    for (EdgeIndex e : forward ? g.out_edges(v) : g.in_edges(v)) {
      const VertexIndex w = forward ? g.edge_to(e) : g.edge_from(e);
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

void validate(const AgentGraph& g) {
  const auto s = g.source();
  const auto t = g.terminal();
  if (!s || !t || *s == *t) {
    throw Error(ErrorCode::kMissingSourceOrTerminal,
                "graph needs distinct source and terminal vertices (source '" + g.source_id() + "', terminal '" +
                    g.terminal_id() + "')");
  }
  if (auto cycle = find_cycle(g); !cycle.empty()) {
    std::string edges;
    for (EdgeIndex e : cycle) {
      if (!edges.empty()) edges += ", ";
      edges += g.id(g.edge_from(e)) + "->" + g.id(g.edge_to(e));
    }
    throw Error(ErrorCode::kCycleDetected, "cycle " + edges, edges);
  }
  const auto from_s = reach(g, *s, true);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!from_s[v]) throw Error(ErrorCode::kUnreachableVertex, "vertex '" + g.id(v) + "' is not reachable from the source", g.id(v));
  }
  const auto to_t = reach(g, *t, false);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!to_t[v]) throw Error(ErrorCode::kDeadEndVertex, "vertex '" + g.id(v) + "' cannot reach the terminal", g.id(v));
  }
}

std::vector<VertexIndex> topological_order(const AgentGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> indegree(n);
  for (VertexIndex v = 0; v < n; ++v) indegree[v] = g.in_edges(v).size();
  std::priority_queue<VertexIndex, std::vector<VertexIndex>, std::greater<>> ready;
  for (VertexIndex v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  const auto s = g.source();
  std::vector<VertexIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    const VertexIndex v = ready.top();
    ready.pop();
    if (!s || v != *s) order.push_back(v);
    for (EdgeIndex e : g.out_edges(v)) {
      if (--indegree[g.edge_to(e)] == 0) ready.push(g.edge_to(e));
    }
  }
  return order;
}

std::size_t count_paths(const AgentGraph& g) {
  constexpr std::size_t kSat = std::numeric_limits<std::size_t>::max();
  const auto s = g.source();
  const auto t = g.terminal();
  if (!s || !t) return 0;
  std::vector<std::size_t> ways(g.vertex_count(), 0);
  ways[*s] = 1;
  for (VertexIndex v : topological_order(g)) {
    std::size_t total = 0;
    for (EdgeIndex e : g.in_edges(v)) {
      const std::size_t w = ways[g.edge_from(e)];
      total = (w > kSat - total) ? kSat : total + w;
    }
    ways[v] = total;
  }
  return ways[*t];
}

std::vector<Path> enumerate_paths(const AgentGraph& g, std::size_t cap) {
  const std::size_t total = count_paths(g);
  if (total > cap) {
    throw Error(ErrorCode::kPathBudgetExceeded,
                "graph has " + (total == std::numeric_limits<std::size_t>::max() ? std::string("too many")
                                                                                  : std::to_string(total)) +
                    " paths, cap is " + std::to_string(cap));
  }
  const VertexIndex s = *g.source();
  const VertexIndex t = *g.terminal();
  std::vector<Path> paths;
  paths.reserve(total);
  std::vector<VertexIndex> stack{s};
  std::function<void(VertexIndex)> walk = [&](VertexIndex v) {
    if (v == t) {
      Path p;
      p.vertices.reserve(stack.size());
      for (VertexIndex x : stack) p.vertices.push_back(g.id(x));
      paths.push_back(std::move(p));
      return;
    }
    for (EdgeIndex e : g.out_edges(v)) {
      stack.push_back(g.edge_to(e));
      walk(g.edge_to(e));
      stack.pop_back();
    }
  };
  walk(s);
  return paths;
}

}  // namespace agentvar
