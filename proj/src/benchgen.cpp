// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/benchgen.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>

#include "agentvar/error.hpp"

namespace agentvar {
namespace {

std::string label(const std::string& prefix, std::size_t i, std::size_t max_index) {
  const std::size_t width = std::to_string(max_index).size();
  std::string digits = std::to_string(i);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

const AgentSpec& pick(std::span<const AgentSpec> specs, std::size_t i) {
  return specs.size() == 1 ? specs[0] : specs[i];
}

void check_spec_count(std::span<const AgentSpec> specs, std::size_t edges) {
  if (specs.size() != 1 && specs.size() != edges) {
    throw Error(ErrorCode::kInvalidParams, "expected 1 or " + std::to_string(edges) + " agent specs, got " +
                                               std::to_string(specs.size()));
  }
}

AgentSpec gaussian(double mu, double sigma) { return AgentSpec{dist::Gaussian{mu, sigma}}; }

AgentSpec clearance(double scale, int steps) { return AgentSpec{dist::ShiftedMinDistance{0.0, scale, steps}}; }

AgentSpec carry(double low, double high, bool reset = false) {
  AgentSpec s{dist::Uniform{low, high}};
  s.loss_rule = LossRule::kCumulative;
  s.reset_carry = reset;
  return s;
}

AgentSpec no_box(bool reset = false) {
  AgentSpec s{dist::Constant{0.0}};
  s.loss_rule = LossRule::kNegInf;
  s.reset_carry = reset;
  return s;
}

// Per diamond: j->u, u->j', j->l, l->j'. Larger scale means more clearance.
const std::array<std::array<AgentSpec, 4>, 4>& rooms_table() {
  static const std::array<std::array<AgentSpec, 4>, 4> table{{
      {clearance(1.0, 1), clearance(0.8, 2), clearance(0.5, 1), clearance(0.5, 1)},
      {clearance(0.4, 1), clearance(0.4, 1), clearance(1.2, 2), clearance(0.9, 1)},
      {clearance(1.0, 3), clearance(0.7, 1), clearance(0.6, 1), clearance(0.6, 2)},
      {clearance(0.5, 1), clearance(0.5, 2), clearance(1.1, 1), clearance(0.8, 3)},
  }};
  return table;
}

std::vector<AgentSpec> rooms_specs(std::size_t k) {
  std::vector<AgentSpec> specs;
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& s : rooms_table()[i % 4]) specs.push_back(s);
  }
  return specs;
}

}  // namespace

AgentGraph make_chain(std::size_t m, std::span<const AgentSpec> specs, InitialSpec initial) {
  if (m < 1) throw Error(ErrorCode::kInvalidParams, "chain needs m >= 1");
  check_spec_count(specs, m);
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i <= m; ++i) vertices.push_back(label("v", i, m));
  std::vector<EdgeDecl> edges;
  for (std::size_t i = 0; i < m; ++i) edges.push_back({vertices[i], vertices[i + 1], pick(specs, i)});
  return AgentGraph(vertices, std::move(edges), vertices.front(), vertices.back(), std::move(initial));
}

AgentGraph make_diamond_sequence(std::size_t k, std::span<const AgentSpec> specs) {
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "diamond sequence needs k >= 1");
  check_spec_count(specs, 4 * k);
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i <= k; ++i) vertices.push_back(label("j", i, k));
  std::vector<EdgeDecl> edges;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::string from = label("j", i - 1, k);
    const std::string to = label("j", i, k);
    const std::string up = label("u", i, k);
    const std::string low = label("l", i, k);
    vertices.push_back(up);
    vertices.push_back(low);
    const std::size_t base = 4 * (i - 1);
    edges.push_back({from, up, pick(specs, base)});
    edges.push_back({up, to, pick(specs, base + 1)});
    edges.push_back({from, low, pick(specs, base + 2)});
    edges.push_back({low, to, pick(specs, base + 3)});
  }
  return AgentGraph(vertices, std::move(edges), label("j", 0, k), label("j", k, k));
}

AgentGraph make_two_path(std::size_t vertex_count, std::size_t length, std::span<const AgentSpec> specs) {
  // vertices = prefix + 2 * branch, length = prefix + branch.
  if (vertex_count <= length || 2 * length < vertex_count || vertex_count - length < 2) {
    throw Error(ErrorCode::kInvalidParams, "two_path needs length < vertices <= 2 * length and branches of >= 2 edges");
  }
  const std::size_t branch = vertex_count - length;
  const std::size_t prefix = length - branch;
  check_spec_count(specs, prefix + 2 * branch);

  std::vector<std::string> vertices;
  for (std::size_t i = 0; i <= prefix; ++i) vertices.push_back(label("p", i, prefix));
  const std::string fork = vertices.back();
  std::vector<EdgeDecl> edges;
  for (std::size_t i = 0; i < prefix; ++i) edges.push_back({vertices[i], vertices[i + 1], pick(specs, i)});
  std::size_t next_spec = prefix;
  for (const char* side : {"a", "b"}) {
    std::string prev = fork;
    for (std::size_t i = 1; i < branch; ++i) {
      const std::string v = label(side, i, branch - 1);
      vertices.push_back(v);
      edges.push_back({prev, v, pick(specs, next_spec++)});
      prev = v;
    }
    edges.push_back({prev, "t", pick(specs, next_spec++)});
  }
  vertices.push_back("t");
  return AgentGraph(vertices, std::move(edges), vertices.front(), "t");
}

AgentGraph replicate_path(const AgentGraph& graph, const Path& path, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "replication count must be >= 1");
  const auto edges = graph.path_edges(path);
  std::vector<AgentSpec> specs;
  for (std::size_t r = 0; r < k; ++r) {
    for (EdgeIndex e : edges) specs.push_back(graph.model(e).spec());
  }
  return make_chain(specs.size(), specs, graph.initial());
}

AgentGraph make_correlated_diamond(double rho, double gap) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidParams, "rho must lie in [0, 1]");
  if (!std::isfinite(gap)) throw Error(ErrorCode::kInvalidParams, "gap must be finite");
  const AgentSpec lead{dist::LatentCorrelated{dist::LatentRole::kSource, 0.0, 0.0, 1.0}};
  const AgentSpec follow{dist::LatentCorrelated{dist::LatentRole::kFollower, rho, 0.0, 1.0}};
  std::vector<EdgeDecl> edges{
      {"s", "a", lead},
      {"a", "t", follow},
      {"s", "b", gaussian(gap, 1.0)},
      {"b", "t", gaussian(gap, 1.0)},
  };
  return AgentGraph({"s", "a", "b", "t"}, std::move(edges), "s", "t");
}

AgentGraph make_mousenav_analog() {
  const std::array<AgentSpec, 4> specs{gaussian(-0.40, 0.05), gaussian(-0.40, 0.05), gaussian(-0.30, 0.05),
                                       gaussian(-0.30, 0.05)};
  return make_diamond_sequence(1, specs);
}

AgentGraph make_rooms16_analog() { return make_diamond_sequence(4, rooms_specs(4)); }

AgentGraph make_fetch_analog() {
  const std::array<AgentSpec, 7> specs{
      gaussian(0.00, 0.10), gaussian(0.05, 0.10), gaussian(0.10, 0.08),  // approach, grip, lift
      gaussian(0.25, 0.05), gaussian(0.20, 0.08),                        // route a
      gaussian(0.22, 0.06), gaussian(0.27, 0.04),                        // route b
  };
  return make_two_path(7, 5, specs);
}

AgentGraph make_box_relay_analog() {
  std::vector<EdgeDecl> edges{
      {"0", "1", no_box()},          {"1", "2", no_box()},         {"1", "6", no_box()},
      {"2", "3", carry(40, 90)},     {"3", "4", no_box(true)},     {"4", "5", carry(50, 100)},
      {"6", "7", carry(60, 100)},    {"7", "8", no_box(true)},     {"7", "9", no_box(true)},
      {"8", "9", carry(20, 50)},     {"9", "5", carry(30, 80)},
  };
  return AgentGraph({"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}, std::move(edges), "0", "5");
}

namespace {

class Params {
 public:
  Params(const std::string& family, const std::map<std::string, std::string>& raw) : family_(family), raw_(raw) {}

  std::size_t size(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) {
      if (fallback) return *fallback;
      throw Error(ErrorCode::kInvalidParams, family_ + " needs parameter " + key);
    }
    std::size_t v = 0;
    const auto& s = it->second;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw Error(ErrorCode::kInvalidParams, key + " must be a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  double real(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidParams, key + " must be a number, got '" + it->second + "'");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [k, v] : raw_) {
      if (!used_.count(k)) throw Error(ErrorCode::kInvalidParams, "unknown parameter '" + k + "' for " + family_);
    }
  }

 private:
  std::string family_;
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> used_;
};

AgentSpec preset(const std::string& name) {
  if (name == "uniform") return AgentSpec{dist::Uniform{0.0, 1.0}};
  if (name == "gaussian") return gaussian(0.0, 1.0);
  if (name == "exponential") return AgentSpec{dist::Exponential{1.0, 0.0}};
  if (name == "constant") return AgentSpec{dist::Constant{1.0}};
  if (name == "min-distance") return clearance(1.0, 1);
  throw Error(ErrorCode::kInvalidParams, "unknown dist preset '" + name + "'");
}

}  // namespace

AgentGraph make_benchmark(const std::string& family, const std::map<std::string, std::string>& raw) {
  Params p(family, raw);
  auto done = [&](AgentGraph g) {
    p.finish();
    return g;
  };
  if (family == "chain") {
    const std::size_t m = p.size("m");
    const AgentSpec spec = preset(p.text("dist", "uniform"));
    return done(make_chain(m, std::span(&spec, 1)));
  }
  if (family == "diamond_sequence") {
    const std::size_t k = p.size("k");
    if (k < 1) throw Error(ErrorCode::kInvalidParams, "diamond sequence needs k >= 1");
    return done(make_diamond_sequence(k, rooms_specs(k)));
  }
  if (family == "two_path") {
    const std::size_t v = p.size("vertices", 7);
    const std::size_t len = p.size("length", 5);
    const AgentSpec spec = preset(p.text("dist", "uniform"));
    return done(make_two_path(v, len, std::span(&spec, 1)));
  }
  if (family == "replicated_path") {
    const std::size_t k = p.size("k");
    const std::size_t m = p.size("m", 8);
    const AgentSpec spec = preset(p.text("dist", "uniform"));
    const AgentGraph base = make_chain(m, std::span(&spec, 1));
    return done(replicate_path(base, enumerate_paths(base).front(), k));
  }
  if (family == "correlated_diamond") {
    const double rho = p.real("rho", 1.0);
    const double gap = p.real("gap", 0.5);
    return done(make_correlated_diamond(rho, gap));
  }
  if (family == "mousenav") return done(make_mousenav_analog());
  if (family == "rooms16") return done(make_rooms16_analog());
  if (family == "fetch") return done(make_fetch_analog());
  if (family == "box_relay") return done(make_box_relay_analog());
  throw Error(ErrorCode::kInvalidParams, "unknown family '" + family + "'");
}

}  // namespace agentvar
