// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/agent.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agentvar/error.hpp"

namespace agentvar {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double draw_value(const dist::Constant& d, const Value&, SplitMix64&) { return d.value; }

double draw_value(const dist::Uniform& d, const Value&, SplitMix64& rng) {
  return rng.uniform(d.low, d.high);
}

double draw_value(const dist::Gaussian& d, const Value&, SplitMix64& rng) {
  return d.mu + d.sigma * rng.normal();
}

double draw_value(const dist::Exponential& d, const Value&, SplitMix64& rng) {
  return d.shift + rng.exponential(d.rate);
}

double draw_value(const dist::ShiftedMinDistance& d, const Value&, SplitMix64& rng) {
  double closest = 1.0;
  for (int i = 0; i < d.steps; ++i) closest = std::min(closest, rng.uniform());
  return d.shift - d.scale * closest;
}

double latent_factor(const dist::LatentCorrelated& d, const Value& in, SplitMix64& rng) {
  if (d.role == dist::LatentRole::kSource) return rng.normal();
  if (!in.has_latent()) {
    throw Error(ErrorCode::kDomainMismatch,
                "latent-correlated follower needs an input carrying a latent factor");
  }
  const double w = rng.normal();
  return d.rho * in.latent + std::sqrt(1.0 - d.rho * d.rho) * w;
}

double draw_value(const dist::LatentCorrelated& d, const Value& in, SplitMix64& rng) {
  return d.mu + d.sigma * latent_factor(d, in, rng);
}

double draw_value(const dist::Empirical& d, const Value&, SplitMix64& rng) {
  const auto& v = *d.values;
  auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(v.size()));
  if (idx >= v.size()) idx = v.size() - 1;
  return v[idx];
}

double loss_for(LossRule rule, const Trace& t) noexcept {
  switch (rule) {
    case LossRule::kIdentity: return t.value;
    case LossRule::kNegInf: return kNegInf;
    case LossRule::kCumulative: return t.carry_in + t.value;
  }
  return t.value;
}

Value output_for(const AgentSpec& spec, const Value& in, const Trace& t, double latent) {
  Value out = in;
  switch (spec.output_rule) {
    case OutputRule::kPassthrough: break;
    case OutputRule::kConstant: out.x = spec.output_value; break;
    case OutputRule::kOffset: out.x = in.x + spec.output_value; break;
  }
  if (spec.loss_rule == LossRule::kCumulative) {
    out.carry = loss_for(spec.loss_rule, t);
  } else if (spec.reset_carry) {
    out.carry = 0.0;
  }
  out.latent = latent;
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidParams, what);
}

void check_distribution(const Distribution& d) {
  std::visit(Overloaded{
                 [](const dist::Constant& c) { require(std::isfinite(c.value), "constant must be finite"); },
                 [](const dist::Uniform& u) {
                   require(std::isfinite(u.low) && std::isfinite(u.high) && u.low < u.high,
                           "uniform needs low < high");
                 },
                 [](const dist::Gaussian& g) {
                   require(std::isfinite(g.mu) && g.sigma > 0 && std::isfinite(g.sigma),
                           "gaussian needs sigma > 0");
                 },
                 [](const dist::Exponential& e) {
                   require(e.rate > 0 && std::isfinite(e.rate) && std::isfinite(e.shift),
                           "exponential needs rate > 0");
                 },
                 [](const dist::ShiftedMinDistance& s) {
                   require(std::isfinite(s.shift) && s.scale > 0 && std::isfinite(s.scale) && s.steps >= 1,
                           "shifted-min-distance needs scale > 0 and steps >= 1");
                 },
                 [](const dist::LatentCorrelated& l) {
                   require(l.rho >= 0.0 && l.rho <= 1.0, "latent-correlated needs rho in [0,1]");
                   require(std::isfinite(l.mu) && l.sigma > 0 && std::isfinite(l.sigma),
                           "latent-correlated needs sigma > 0");
                 },
                 [](const dist::Empirical& e) {
                   require(e.values && !e.values->empty(), "empirical sample file '" + e.file + "' is empty");
                   for (double v : *e.values) require(v < kPosInf && v == v, "empirical losses must not be +inf or NaN");
                 },
             },
             d);
}

}  // namespace

std::string_view kind_name(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const dist::Constant&) { return std::string_view("constant"); },
                        [](const dist::Uniform&) { return std::string_view("uniform"); },
                        [](const dist::Gaussian&) { return std::string_view("gaussian"); },
                        [](const dist::Exponential&) { return std::string_view("exponential"); },
                        [](const dist::ShiftedMinDistance&) { return std::string_view("shifted-min-distance"); },
                        [](const dist::LatentCorrelated&) { return std::string_view("latent-correlated"); },
                        [](const dist::Empirical&) { return std::string_view("empirical"); },
                    },
                    d);
}

dist::Empirical load_empirical(const std::string& file, const std::string& base_dir) {
  std::filesystem::path p(file);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kIo, "cannot open sample file " + p.string(), p.string());
  auto values = std::make_shared<std::vector<double>>();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double v = 0;
    if (!(ls >> v)) {
      throw Error(ErrorCode::kParse, p.string() + ":" + std::to_string(lineno) + ": not a decimal", p.string());
    }
    values->push_back(v);
  }
  if (values->empty()) throw Error(ErrorCode::kInvalidParams, "sample file " + p.string() + " is empty", p.string());
  return dist::Empirical{file, std::move(values)};
}

void check_spec(const AgentSpec& spec) {
  check_distribution(spec.distribution);
  require(std::isfinite(spec.output_value), "output_value must be finite");
}

void check_initial(const InitialSpec& spec) {
  check_distribution(spec.distribution);
  require(!std::holds_alternative<dist::LatentCorrelated>(spec.distribution),
          "initial distribution cannot be latent-correlated");
}

EdgeModel::EdgeModel(AgentSpec spec) : spec_(std::move(spec)) { check_spec(spec_); }

EdgeModel::Draw EdgeModel::sample(const Value& input, SplitMix64& rng) const {
  return std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        Trace t{0.0, input.carry};
        double latent = input.latent;
        if constexpr (std::is_same_v<D, dist::LatentCorrelated>) {
          const double z = latent_factor(d, input, rng);
          t.value = d.mu + d.sigma * z;
          if (d.role == dist::LatentRole::kSource) latent = z;
        } else {
          t.value = draw_value(d, input, rng);
        }
        return Draw{t, output_for(spec_, input, t, latent)};
      },
      spec_.distribution);
}

double EdgeModel::loss(const Trace& trace) const noexcept { return loss_for(spec_.loss_rule, trace); }

void EdgeModel::draw_losses(std::span<const Value> inputs, StreamKey key, std::span<double> losses) const {
  const LossRule rule = spec_.loss_rule;
  std::visit(
      [&](const auto& d) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          SplitMix64 rng = derive_rng(key, i);
          const Trace t{draw_value(d, inputs[i], rng), inputs[i].carry};
          losses[i] = loss_for(rule, t);
        }
      },
      spec_.distribution);
}

void EdgeModel::draw_outputs(std::span<const Value> inputs, StreamKey key, std::span<Value> outputs) const {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    SplitMix64 rng = derive_rng(key, i);
    outputs[i] = sample(inputs[i], rng).output;
  }
}

void draw_initial(const InitialSpec& spec, StreamKey key, std::span<Value> out) {
  std::visit(
      [&](const auto& d) {
        for (std::size_t i = 0; i < out.size(); ++i) {
          SplitMix64 rng = derive_rng(key, i);
          out[i] = Value{};
          out[i].x = draw_value(d, out[i], rng);
        }
      },
      spec.distribution);
}

}  // namespace agentvar
