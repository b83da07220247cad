// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numeric>

#include "agentvar/benchgen.hpp"
#include "agentvar/bucketed_var.hpp"
#include "agentvar/error.hpp"
#include "support/brute_force.hpp"

using namespace agentvar;

namespace {

RiskConfig cfg(double alpha, std::size_t d, std::size_t n, std::uint64_t seed = 0) {
  RiskConfig c;
  c.alpha = alpha;
  c.buckets = d;
  c.samples = n;
  c.seed = seed;
  return c;
}

AgentSpec uni() { return AgentSpec{dist::Uniform{0.0, 1.0}}; }
AgentSpec constant(double v) { return AgentSpec{dist::Constant{v}}; }

}  // namespace

TEST_CASE("single uniform edge") {
  const auto g = make_chain(1, std::vector<AgentSpec>{uni()});
  const auto r = bucketed_var(g, cfg(0.1, 1, 10'000));
  CHECK(r.estimate == doctest::Approx(0.9).epsilon(0.012));
  CHECK(r.path.vertices == std::vector<std::string>{"v0", "v1"});
  CHECK(*r.allocation == std::vector<std::size_t>{1});
  CHECK(report_allocation(r) == "1ᾱ (ᾱ=0.1)");
}

TEST_CASE("deterministic chain returns the larger constant") {
  const auto g = make_chain(2, std::vector<AgentSpec>{constant(2), constant(5)});
  for (std::size_t d : {1u, 7u, 50u}) CHECK(bucketed_var(g, cfg(0.3, d, 20)).estimate == 5.0);
}

TEST_CASE("two uniform edges split the budget") {
  const auto g = make_chain(2, std::vector<AgentSpec>{uni()});
  const auto r = bucketed_var(g, cfg(0.1, 100, 10'000));
  CHECK(r.estimate == doctest::Approx(0.95).epsilon(0.01));
  const auto& a = *r.allocation;
  CHECK(std::accumulate(a.begin(), a.end(), std::size_t{0}) == 100);
  CHECK(r.diagnostics.quantile_evaluations == 101 + 101 * 102 / 2);
  CHECK(r.diagnostics.quantile_evaluations == r.diagnostics.predicted_quantile_evaluations);
}

TEST_CASE("table invariants") {
  const auto g = make_diamond_sequence(2, std::vector<AgentSpec>{uni()});
  const auto c = cfg(0.1, 12, 500, 4);
  const BucketTable t = build_bucket_table(g, c);
  const VertexIndex s = *g.source();
  for (std::size_t b = 0; b <= 12; ++b) CHECK(t.var(s, b) == kNegInf);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (v == s) continue;
    for (std::size_t b = 0; b <= 12; ++b) {
      const Path p = t.path_to(g, v, b);
      CHECK(p.vertices.front() == g.source_id());
      CHECK(p.vertices.back() == g.id(v));
      const auto alloc = t.allocation_to(g, v, b);
      CHECK(alloc.size() == p.edge_count());
      CHECK(std::accumulate(alloc.begin(), alloc.end(), std::size_t{0}) == b);
    }
  }
  CHECK(t.cells == (g.vertex_count() - 1) * 13);
}

TEST_CASE("memoized rows never increase with budget") {
  const auto g = make_diamond_sequence(2, std::vector<AgentSpec>{AgentSpec{dist::Gaussian{0.0, 1.0}}});
  const BucketTable t = build_bucket_table(g, cfg(0.2, 20, 400, 1), BucketedOptions{true, 1});
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t b = 1; b <= 20; ++b) CHECK(t.var(v, b) <= t.var(v, b - 1));
  }
}

TEST_CASE("thread count does not change the answer") {
  const auto g = make_diamond_sequence(3, std::vector<AgentSpec>{AgentSpec{dist::Exponential{2.0, 0.0}}});
  const auto c = cfg(0.1, 15, 300, 9);
  for (bool memo : {false, true}) {
    const auto one = bucketed_var(g, c, BucketedOptions{memo, 1});
    const auto four = bucketed_var(g, c, BucketedOptions{memo, 4});
    CHECK(one.estimate == four.estimate);
    CHECK(one.path == four.path);
    CHECK(*one.allocation == *four.allocation);
  }
}

TEST_CASE("matches the exhaustive reference") {
  const auto g = make_diamond_sequence(
      1, std::vector<AgentSpec>{uni(), AgentSpec{dist::Gaussian{0.2, 0.3}}, uni(), AgentSpec{dist::Exponential{3.0, 0.0}}});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto c = cfg(0.1, 6, 200, seed);
    CHECK(bucketed_var(g, c).estimate == testing::brute_force_min(g, 0.1, 6, 200, seed).value);
  }
}

TEST_CASE("ties go to the first predecessor") {
  const AgentGraph g({"a", "b", "s", "t"},
                     {{"s", "a", constant(1)}, {"a", "t", constant(2)}, {"s", "b", constant(2)},
                      {"b", "t", constant(1)}},
                     "s", "t");
  const auto r = bucketed_var(g, cfg(0.1, 4, 10));
  CHECK(r.estimate == 2.0);
  CHECK(r.path.vertices == std::vector<std::string>{"s", "a", "t"});
}

TEST_CASE("all -inf losses give -inf") {
  AgentSpec relay{dist::Uniform{0.0, 1.0}};
  relay.loss_rule = LossRule::kNegInf;
  const auto g = make_chain(3, std::vector<AgentSpec>{relay});
  CHECK(bucketed_var(g, cfg(0.1, 5, 50)).estimate == kNegInf);
}

TEST_CASE("report_allocation") {
  VarResult r;
  r.path = Path{{"a", "b", "c", "d"}};
  r.allocation = std::vector<std::size_t>{16, 0, 10};
  r.config = cfg(0.1, 100, 1);
  CHECK(report_allocation(r) == "16ᾱ, 0ᾱ, 10ᾱ (ᾱ=0.001)");
  r.path = Path{{"a", "b"}};
  r.allocation = std::vector<std::size_t>{100};
  CHECK(report_allocation(r) == "100ᾱ (ᾱ=0.001)");
  r.path = Path{};
  CHECK_THROWS_AS(report_allocation(r), Error);
}

TEST_CASE("invalid configuration") {
  const auto g = make_chain(1, std::vector<AgentSpec>{uni()});
  for (const RiskConfig& c : {cfg(0.0, 1, 1), cfg(1.0, 1, 1), cfg(0.1, 0, 1), cfg(0.1, 1, 0)}) {
    try {
      bucketed_var(g, c);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidConfig);
    }
  }
}
