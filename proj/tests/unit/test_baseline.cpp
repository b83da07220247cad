// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "agentvar/baseline.hpp"
#include "agentvar/benchgen.hpp"
#include "agentvar/error.hpp"

using namespace agentvar;

namespace {

RiskConfig cfg(double alpha, std::size_t n, std::uint64_t seed = 0) {
  RiskConfig c;
  c.alpha = alpha;
  c.samples = n;
  c.seed = seed;
  return c;
}

AgentSpec constant(double v) { return AgentSpec{dist::Constant{v}}; }

const ContextTag kTag{Context::kUser, 0, 0};

}  // namespace

TEST_CASE("rollouts take the max over the path") {
  const auto chain = make_chain(2, std::vector<AgentSpec>{constant(2), constant(5)});
  const auto path = enumerate_paths(chain)[0];
  const auto s = rollout_path(chain, path, 100, SeedDerivation{0}, kTag);
  CHECK(std::all_of(s.values().begin(), s.values().end(), [](double v) { return v == 5.0; }));

  const auto uni = make_chain(2, std::vector<AgentSpec>{AgentSpec{dist::Uniform{0.0, 1.0}}});
  const auto u = rollout_path(uni, enumerate_paths(uni)[0], 100'000, SeedDerivation{1}, kTag);
  CHECK(empirical_cdf(u.values(), 0.9) == doctest::Approx(0.81).epsilon(0.012));

  AgentSpec relay{dist::Uniform{0.0, 1.0}};
  relay.loss_rule = LossRule::kNegInf;
  const auto mixed = make_chain(2, std::vector<AgentSpec>{relay, AgentSpec{dist::Uniform{0.0, 1.0}}});
  const auto path2 = enumerate_paths(mixed)[0];
  const auto m = rollout_path(mixed, path2, 50, SeedDerivation{2}, kTag);
  const EdgeModel& second = mixed.model(1);
  const StreamKey key = derive_key(SeedDerivation{2}, 1, kTag);
  for (std::size_t i = 0; i < m.size(); ++i) {
    SplitMix64 rng = derive_rng(key, i);
    CHECK(m.values()[i] == second.sample(Value{}, rng).trace.value);
  }
}

TEST_CASE("baseline picks the lower path") {
  const AgentGraph g({"a", "b", "s", "t"},
                     {{"s", "a", AgentSpec{dist::Uniform{0.0, 1.0}}},
                      {"a", "t", constant(0.0)},
                      {"s", "b", AgentSpec{dist::Uniform{0.2, 1.2}}},
                      {"b", "t", constant(0.0)}},
                     "s", "t");
  const auto r = baseline_var(g, cfg(0.1, 10'000));
  CHECK(r.path.vertices == std::vector<std::string>{"s", "a", "t"});
  CHECK(r.estimate == doctest::Approx(0.9).epsilon(0.02));
  CHECK(!r.allocation);
  REQUIRE(r.per_path.size() == 2);
  const auto best = std::min_element(r.per_path.begin(), r.per_path.end(),
                                     [](const PathEstimate& a, const PathEstimate& b) { return a.q < b.q; });
  CHECK(best->q == r.estimate);
  CHECK(best->path == r.path);
}

TEST_CASE("single path and deterministic diamonds") {
  const auto chain = make_chain(3, std::vector<AgentSpec>{AgentSpec{dist::Gaussian{0.0, 1.0}}});
  const auto c = cfg(0.1, 2000, 3);
  const auto r = baseline_var(chain, c);
  const auto s = rollout_path(chain, r.path, 2000, SeedDerivation{3}, ContextTag{Context::kBaseline, 0, 0});
  CHECK(r.estimate == empirical_quantile(s, 0.9));

  const AgentGraph det({"a", "b", "s", "t"},
                       {{"s", "a", constant(3)}, {"a", "t", constant(1)}, {"s", "b", constant(4)},
                        {"b", "t", constant(1)}},
                       "s", "t");
  const auto d = baseline_var(det, c);
  CHECK(d.estimate == 3.0);
  CHECK(d.path.vertices == std::vector<std::string>{"s", "a", "t"});
}

TEST_CASE("path budget") {
  const auto g = make_diamond_sequence(5, std::vector<AgentSpec>{AgentSpec{dist::Uniform{0.0, 1.0}}});
  try {
    baseline_var(g, cfg(0.1, 10), 16);
    FAIL("expected PathBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPathBudgetExceeded);
  }
}
