// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "agentvar/baseline.hpp"
#include "agentvar/error.hpp"
#include "agentvar/quantile.hpp"

namespace agentvar {

CoverageReport coverage(const AgentGraph& graph, const Path& path, double q, std::size_t n, std::uint64_t seed,
                        double alpha) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "coverage needs N >= 1");
  const SampleSet losses = rollout_path(graph, path, n, SeedDerivation{seed}, ContextTag{Context::kCoverage, 0, 0});
  CoverageReport r;
  r.estimate = q;
  r.path = path;
  r.samples = n;
  r.covered = static_cast<std::size_t>(
      std::count_if(losses.values().begin(), losses.values().end(), [q](double v) { return v <= q; }));
  r.coverage = static_cast<double>(r.covered) / static_cast<double>(n);
  r.ci = clopper_pearson(r.covered, n, 0.95);
  r.target = 1.0 - alpha;
  return r;
}

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  // 1 - p is exact here; refining in the lower tail avoids cancellation in erfc.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  // One Halley step on erfc brings the rational approximation to full precision.
  const double x = approx_normal_quantile(p);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void unsupported(const AgentGraph& g, EdgeIndex e, const std::string& why) {
  const std::string label = g.id(g.edge_from(e)) + "->" + g.id(g.edge_to(e));
  throw Error(ErrorCode::kUnsupportedEdgeKind, "edge " + label + ": " + why, label);
}

void check_supported(const AgentGraph& g, EdgeIndex e) {
  const AgentSpec& spec = g.model(e).spec();
  if (spec.loss_rule == LossRule::kNegInf) return;
  if (spec.loss_rule == LossRule::kCumulative) unsupported(g, e, "cumulative losses have no closed form");
  if (std::holds_alternative<dist::Empirical>(spec.distribution)) unsupported(g, e, "empirical agents have no closed form");
}

}  // namespace

AnalyticOracle::AnalyticOracle(AgentGraph graph) : graph_(std::move(graph)) {}

double AnalyticOracle::edge_cdf(EdgeIndex e, double x) const {
  check_supported(graph_, e);
  const AgentSpec& spec = graph_.model(e).spec();
  if (spec.loss_rule == LossRule::kNegInf) return 1.0;
  return std::visit(
      Overloaded{
          [&](const dist::Constant& c) { return x >= c.value ? 1.0 : 0.0; },
          [&](const dist::Uniform& u) { return std::clamp((x - u.low) / (u.high - u.low), 0.0, 1.0); },
          [&](const dist::Gaussian& g) { return normal_cdf((x - g.mu) / g.sigma); },
          [&](const dist::Exponential& ex) { return x <= ex.shift ? 0.0 : -std::expm1(-ex.rate * (x - ex.shift)); },
          [&](const dist::ShiftedMinDistance& s) {
            if (x >= s.shift) return 1.0;
            const double m = (s.shift - x) / s.scale;
            if (m >= 1.0) return 0.0;
            return std::pow(1.0 - m, s.steps);
          },
          [&](const dist::LatentCorrelated& l) { return normal_cdf((x - l.mu) / l.sigma); },
          [&](const dist::Empirical&) -> double { unsupported(graph_, e, "empirical"); },
      },
      spec.distribution);
}

double AnalyticOracle::edge_quantile(EdgeIndex e, double level) const {
  check_supported(graph_, e);
  const AgentSpec& spec = graph_.model(e).spec();
  if (spec.loss_rule == LossRule::kNegInf) return kNegInf;
  level = std::clamp(level, 0.0, 1.0);
  return std::visit(
      Overloaded{
          [&](const dist::Constant& c) { return c.value; },
          [&](const dist::Uniform& u) { return u.low + level * (u.high - u.low); },
          [&](const dist::Gaussian& g) { return g.mu + g.sigma * normal_quantile(level); },
          [&](const dist::Exponential& ex) {
            return level >= 1.0 ? kPosInf : ex.shift - std::log1p(-level) / ex.rate;
          },
          [&](const dist::ShiftedMinDistance& s) {
            return s.shift - s.scale * (1.0 - std::pow(level, 1.0 / s.steps));
          },
          [&](const dist::LatentCorrelated& l) { return l.mu + l.sigma * normal_quantile(level); },
          [&](const dist::Empirical&) -> double { unsupported(graph_, e, "empirical"); },
      },
      spec.distribution);
}

std::vector<AnalyticOracle::Group> AnalyticOracle::groups(const Path& path) const {
  std::vector<Group> out;
  std::optional<std::size_t> latent_group;
  for (EdgeIndex e : graph_.path_edges(path)) {
    check_supported(graph_, e);
    const AgentSpec& spec = graph_.model(e).spec();
    const auto* lc = std::get_if<dist::LatentCorrelated>(&spec.distribution);
    if (lc && lc->role == dist::LatentRole::kFollower) {
      if (!latent_group) {
        throw Error(ErrorCode::kDomainMismatch, "latent-correlated follower without an upstream latent source");
      }
      if (lc->rho == 1.0) {
        out[*latent_group].members.push_back(e);
        continue;
      }
      if (lc->rho != 0.0) unsupported(graph_, e, "partially correlated losses (0 < rho < 1)");
    }
    out.push_back(Group{{e}});
    if (lc && lc->role == dist::LatentRole::kSource) latent_group = out.size() - 1;
  }
  return out;
}

bool AnalyticOracle::supports(const Path& path) const {
  try {
    groups(path);
    return true;
  } catch (const Error&) {
    return false;
  }
}

double AnalyticOracle::path_cdf(const Path& path, double x) const {
  double total = 1.0;
  for (const Group& g : groups(path)) {
    double f = 1.0;
    for (EdgeIndex e : g.members) f = std::min(f, edge_cdf(e, x));
    total *= f;
  }
  return total;
}

double AnalyticOracle::var(const Path& path, double level) const {
  if (!(level >= 0.0 && level <= 1.0)) throw Error(ErrorCode::kInvalidParams, "level must lie in [0, 1]");
  const auto gs = groups(path);
  if (level == 0.0) return kNegInf;
  const double per_group = std::pow(level, 1.0 / static_cast<double>(gs.size()));
  double lo = kNegInf;
  double hi = kNegInf;
  for (const Group& g : gs) {
    for (EdgeIndex e : g.members) {
      lo = std::max(lo, edge_quantile(e, level));
      hi = std::max(hi, edge_quantile(e, per_group));
    }
  }
  // Every edge loss is -inf: the path loss is -inf with probability one.
  if (lo == kNegInf) return kNegInf;
  auto cdf = [&](double x) {
    double total = 1.0;
    for (const Group& g : gs) {
      double f = 1.0;
      for (EdgeIndex e : g.members) f = std::min(f, edge_cdf(e, x));
      total *= f;
    }
    return total;
  };
  if (cdf(lo) >= level) return lo;
  if (hi == kPosInf) return kPosInf;
  // Quantile approximations can land a hair short of the bracket.
  for (double step = 1e-12 * std::max(1.0, std::abs(hi)); cdf(hi) < level; step *= 2) hi += step;
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) >= level) hi = mid; else lo = mid;
  }
  return hi;
}

double analytic_var(const AnalyticOracle& oracle, const Path& path, double level) {
  return oracle.var(path, level);
}

TheoremVerdicts theorem_verdicts(const VarResult& result, const AnalyticOracle& oracle, const RiskConfig& config) {
  config.validate();
  const AgentGraph& g = oracle.graph();
  const TheoremBounds bounds =
      theorem_bounds(g.vertex_count(), config.samples, config.buckets, config.alpha, config.delta);

  TheoremVerdicts v;
  v.gamma = bounds.gamma;
  v.thm1_threshold = oracle.var(result.path, bounds.lower_level);
  v.thm1_lower_ok = result.estimate >= v.thm1_threshold;

  const auto paths = enumerate_paths(g);
  v.optimal_var = kPosInf;
  for (const Path& p : paths) {
    const double q = oracle.var(p, 1.0 - config.alpha);
    if (q < v.optimal_var || v.optimal_path.vertices.empty()) {
      v.optimal_var = q;
      v.optimal_path = p;
    }
  }

  const double d = static_cast<double>(config.buckets);
  double spread = 0.0;
  for (EdgeIndex e : g.path_edges(v.optimal_path)) {
    const double top = oracle.edge_quantile(e, 1.0 - config.alpha / d);
    const double bottom = oracle.edge_quantile(e, 1.0 - config.alpha);
    if (std::isfinite(top) && std::isfinite(bottom)) spread = std::max(spread, top - bottom);
  }
  v.slack = 3.0 * std::sqrt(std::log(40.0) / (2.0 * static_cast<double>(config.samples))) + spread / d;
  v.thm2_ceiling = oracle.var(v.optimal_path, bounds.upper_level) + v.slack;
  v.thm2_upper_ok = result.estimate <= v.thm2_ceiling;
  return v;
}

}  // namespace agentvar
