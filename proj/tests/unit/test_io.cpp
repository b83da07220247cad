// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>

#include "agentvar/benchgen.hpp"
#include "agentvar/bucketed_var.hpp"
#include "agentvar/baseline.hpp"
#include "agentvar/error.hpp"
#include "agentvar/io.hpp"

using namespace agentvar;

namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    io::parse_graph(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

std::string drop_line_two(const std::string& s) {
  const auto a = s.find('\n');
  const auto b = s.find('\n', a + 1);
  return s.substr(0, a + 1) + s.substr(b + 1);
}

}  // namespace

TEST_CASE("graph round trip keeps content and hash") {
  for (const char* name : {"mousenav", "rooms16", "fetch", "box_relay"}) {
    CAPTURE(name);
    const auto g = make_benchmark(name, {});
    const std::string text = io::dump_graph(g);
    const auto back = io::parse_graph(text);
    CHECK(io::dump_graph(back) == text);
    CHECK(io::graph_hash(back) == io::graph_hash(g));
  }
  const auto a = make_correlated_diamond(1.0);
  const auto b = make_correlated_diamond(0.5);
  CHECK(io::graph_hash(a) != io::graph_hash(b));
}

TEST_CASE("flat agent specs with either kind spelling") {
  const auto g = io::parse_graph(R"({
    "vertices": ["s", "t", "m"], "source": "s", "terminal": "t",
    "edges": [
      {"from": "s", "to": "m", "agent": {"kind": "shifted_min_distance", "shift": 0, "scale": 1, "steps": 3}},
      {"from": "m", "to": "t", "agent": {"kind": "gaussian", "mu": 0.0, "sigma": 1.0,
                                         "output_rule": "offset", "output_value": 2, "loss": "neg_inf"}}
    ],
    "initial": {"kind": "uniform", "low": 0, "high": 1}
  })");
  CHECK_NOTHROW(validate(g));
  const auto& spec = g.model(*g.edge_between(g.index_of("m"), g.index_of("t"))).spec();
  CHECK(spec.output_rule == OutputRule::kOffset);
  CHECK(spec.output_value == 2.0);
  CHECK(spec.loss_rule == LossRule::kNegInf);
}

TEST_CASE("empirical files resolve next to the graph") {
  const auto g = io::parse_graph(R"({"vertices": ["s", "t"], "source": "s", "terminal": "t",
    "edges": [{"from": "s", "to": "t", "agent": {"kind": "empirical", "file": "losses.txt"}}]})",
                                 AGENTVAR_TEST_DATA);
  const auto& emp = std::get<dist::Empirical>(g.model(0).spec().distribution);
  CHECK(emp.values->size() == 4);
}

TEST_CASE("malformed graphs") {
  CHECK(parse_code("{") == ErrorCode::kParse);
  CHECK(parse_code(R"({"vertices": ["s"], "source": "s"})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"vertices": ["s","t"], "source": "s", "terminal": "t",
    "edges": [{"from": "s", "to": "t", "agent": {"kind": "warp"}}]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"vertices": ["s","t"], "source": "s", "terminal": "t",
    "edges": [{"from": "s", "to": "t", "agent": {"kind": "uniform", "lo": 0}}]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"vertices": ["s","t"], "source": "s", "terminal": "t",
    "edges": [{"from": "s", "to": "t", "agent": {"kind": "uniform", "low": 2, "high": 1}}]})") ==
        ErrorCode::kInvalidParams);
  CHECK(parse_code(R"({"vertices": ["s","t"], "source": "s", "terminal": "t",
    "edges": [{"from": "s", "to": "t", "agent": {"kind": "empirical", "file": "/nonexistent/x.txt"}}]})") ==
        ErrorCode::kIo);
}

TEST_CASE("result round trip") {
  const auto g = make_diamond_sequence(1, std::vector<AgentSpec>{AgentSpec{dist::Uniform{0.0, 1.0}}});
  RiskConfig c;
  c.buckets = 5;
  c.samples = 200;
  c.seed = 0xffffffffffffffffULL;
  const auto r = bucketed_var(g, c);
  const std::string text = io::dump_result(r, io::graph_hash(g));
  const auto back = io::parse_result(text);
  CHECK(back.graph_hash == io::graph_hash(g));
  CHECK(back.result.estimate == r.estimate);
  CHECK(back.result.path == r.path);
  CHECK(*back.result.allocation == *r.allocation);
  CHECK(back.result.config.seed == c.seed);
  CHECK(back.result.diagnostics.quantile_evaluations == r.diagnostics.quantile_evaluations);

  const auto base = baseline_var(g, c);
  const auto bt = io::parse_result(io::dump_result(base, "x", true));
  CHECK(!bt.result.allocation);
  CHECK(bt.result.per_path.size() == 2);

  // Everything but the header line is a pure function of the inputs.
  CHECK(drop_line_two(text) == drop_line_two(io::dump_result(bucketed_var(g, c), io::graph_hash(g))));
  CHECK(text.substr(text.find('\n') + 1, 12) == "  \"header\": ");
}

TEST_CASE("infinite estimates survive serialization") {
  VarResult r;
  r.estimate = kNegInf;
  r.path = Path{{"s", "t"}};
  const auto back = io::parse_result(io::dump_result(r, "h"));
  CHECK(back.result.estimate == kNegInf);
  CHECK(io::format_real(kPosInf) == "inf");
  CHECK(io::format_real(0.1) == "0.1");
}

TEST_CASE("file errors") {
  try {
    io::read_file("/nonexistent/graph.json");
    FAIL("expected IO error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}
