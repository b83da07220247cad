// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <functional>

#include "agentvar/benchgen.hpp"
#include "agentvar/error.hpp"
#include "agentvar/graph.hpp"

using namespace agentvar;

namespace {

AgentSpec uni() { return AgentSpec{dist::Uniform{0.0, 1.0}}; }

AgentGraph diamond(std::vector<EdgeDecl> extra = {}, std::vector<std::string> extra_vertices = {}) {
  std::vector<std::string> vs{"M", "A", "B", "C"};
  vs.insert(vs.end(), extra_vertices.begin(), extra_vertices.end());
  std::vector<EdgeDecl> es{{"M", "A", uni()}, {"M", "B", uni()}, {"A", "C", uni()}, {"B", "C", uni()}};
  es.insert(es.end(), extra.begin(), extra.end());
  return AgentGraph(vs, es, "M", "C");
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("validate accepts a diamond and names the first broken invariant") {
  CHECK_NOTHROW(validate(diamond()));

  const auto cyclic = diamond({{"C", "M", uni()}});
  CHECK(code_of([&] { validate(cyclic); }) == ErrorCode::kCycleDetected);

  try {
    validate(diamond({}, {"X"}));
    FAIL("expected UnreachableVertex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnreachableVertex);
    CHECK(e.subject() == "X");
  }

  try {
    validate(diamond({{"A", "D", uni()}}, {"D"}));
    FAIL("expected DeadEndVertex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDeadEndVertex);
    CHECK(e.subject() == "D");
  }

  const AgentGraph no_terminal({"s", "a"}, {{"s", "a", uni()}}, "s", "t");
  CHECK(code_of([&] { validate(no_terminal); }) == ErrorCode::kMissingSourceOrTerminal);
}

TEST_CASE("constructor rejects malformed declarations") {
  CHECK(code_of([] { AgentGraph({"s", "s"}, {}, "s", "t"); }) == ErrorCode::kInvalidGraph);
  CHECK(code_of([] { AgentGraph({"s", "t"}, {{"s", "x", uni()}}, "s", "t"); }) == ErrorCode::kInvalidGraph);
  CHECK(code_of([] { AgentGraph({"s", "t"}, {{"s", "t", uni()}, {"s", "t", uni()}}, "s", "t"); }) ==
        ErrorCode::kInvalidGraph);
  CHECK(code_of([] { AgentGraph({"s", "t"}, {{"s", "t", AgentSpec{dist::Uniform{1.0, 1.0}}}}, "s", "t"); }) ==
        ErrorCode::kInvalidParams);
}

TEST_CASE("topological order excludes the source and breaks ties by id") {
  const auto g = diamond();
  std::vector<std::string> ids;
  for (auto v : topological_order(g)) ids.push_back(g.id(v));
  CHECK(ids == std::vector<std::string>{"A", "B", "C"});

  const auto chain = make_chain(2, std::vector<AgentSpec>{uni()});
  ids.clear();
  for (auto v : topological_order(chain)) ids.push_back(chain.id(v));
  CHECK(ids == std::vector<std::string>{"v1", "v2"});

  const auto rooms = make_diamond_sequence(4, std::vector<AgentSpec>{uni()});
  const auto order = topological_order(rooms);
  REQUIRE(order.size() == 12);
  CHECK(rooms.id(order.back()) == rooms.terminal_id());
  std::vector<std::size_t> pos(rooms.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (EdgeIndex e = 0; e < rooms.edge_count(); ++e) {
    if (rooms.edge_from(e) == *rooms.source()) continue;
    CHECK(pos[rooms.edge_from(e)] < pos[rooms.edge_to(e)]);
  }
}

TEST_CASE("enumerate_paths counts and orders paths") {
  const auto paths = enumerate_paths(diamond());
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].vertices == std::vector<std::string>{"M", "A", "C"});
  CHECK(paths[1].vertices == std::vector<std::string>{"M", "B", "C"});

  for (std::size_t k = 1; k <= 6; ++k) {
    const auto g = make_diamond_sequence(k, std::vector<AgentSpec>{uni()});
    const auto ps = enumerate_paths(g);
    CHECK(ps.size() == (std::size_t{1} << k));
    CHECK(count_paths(g) == ps.size());
    CHECK(std::all_of(ps.begin(), ps.end(), [&](const Path& p) { return p.edge_count() == 2 * k; }));
    CHECK(std::is_sorted(ps.begin(), ps.end(),
                         [](const Path& a, const Path& b) { return a.vertices < b.vertices; }));
  }
  CHECK(enumerate_paths(make_chain(5, std::vector<AgentSpec>{uni()})).size() == 1);

  const auto big = make_diamond_sequence(6, std::vector<AgentSpec>{uni()});
  CHECK(code_of([&] { enumerate_paths(big, 63); }) == ErrorCode::kPathBudgetExceeded);
}

TEST_CASE("path_edges rejects non-paths") {
  const auto g = diamond();
  CHECK(g.path_edges(Path{{"M", "A", "C"}}).size() == 2);
  CHECK(code_of([&] { g.path_edges(Path{{"M", "C"}}); }) == ErrorCode::kNotAPath);
  CHECK(code_of([&] { g.path_edges(Path{{"A", "C"}}); }) == ErrorCode::kNotAPath);
  CHECK(code_of([&] { g.path_edges(Path{{"M", "A"}}); }) == ErrorCode::kNotAPath);
}
