// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "agentvar/rng.hpp"

namespace agentvar {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// State handed from one agent to the next. `x` is the task state proper;
/// `carry` accumulates resource usage for cumulative losses; `latent` is the
/// shared factor of latent-correlated agents (NaN when absent).
struct Value {
  double x = 0.0;
  double carry = 0.0;
  double latent = std::numeric_limits<double>::quiet_NaN();

  bool has_latent() const noexcept { return latent == latent; }
};

/// What an agent did on one run. For the analytic kinds `value` is the loss
/// itself; `carry_in` is the carry observed on entry.
struct Trace {
  double value = 0.0;
  double carry_in = 0.0;
};

namespace dist {

struct Constant {
  double value = 0.0;
};
struct Uniform {
  double low = 0.0;
  double high = 1.0;
};
struct Gaussian {
  double mu = 0.0;
  double sigma = 1.0;
};
struct Exponential {
  double rate = 1.0;
  double shift = 0.0;
};
/// Negated clearance: shift - scale * min(U_1..U_steps), U_i ~ uniform(0,1).
/// Mimics a reach-avoid loss defined as minus the closest approach margin.
struct ShiftedMinDistance {
  double shift = 0.0;
  double scale = 1.0;
  int steps = 1;
};
enum class LatentRole { kSource, kFollower };
/// Gaussian loss mu + sigma * Z. A source draws Z fresh and publishes it in
/// the output; a follower uses rho * Z_in + sqrt(1 - rho^2) * W.
struct LatentCorrelated {
  LatentRole role = LatentRole::kSource;
  double rho = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
};
/// Resamples uniformly with replacement from a loss file.
struct Empirical {
  std::string file;
  std::shared_ptr<const std::vector<double>> values;
};

}  // namespace dist

using Distribution = std::variant<dist::Constant, dist::Uniform, dist::Gaussian,
                                  dist::Exponential, dist::ShiftedMinDistance,
                                  dist::LatentCorrelated, dist::Empirical>;

enum class OutputRule { kPassthrough, kConstant, kOffset };
enum class LossRule { kIdentity, kNegInf, kCumulative };

struct AgentSpec {
  Distribution distribution = dist::Constant{};
  OutputRule output_rule = OutputRule::kPassthrough;
  double output_value = 0.0;
  LossRule loss_rule = LossRule::kIdentity;
  bool reset_carry = false;
};

/// Distribution of the task state at the source.
struct InitialSpec {
  Distribution distribution = dist::Constant{};
};

std::string_view kind_name(const Distribution& d);

/// Loads a one-decimal-per-line file into an Empirical distribution.
dist::Empirical load_empirical(const std::string& file, const std::string& base_dir = {});

/// Throws InvalidParams when the spec's parameters are out of range.
void check_spec(const AgentSpec& spec);
void check_initial(const InitialSpec& spec);

/// A validated agent: sampler plus loss map.
class EdgeModel {
 public:
  EdgeModel() = default;
  explicit EdgeModel(AgentSpec spec);

  const AgentSpec& spec() const noexcept { return spec_; }

  struct Draw {
    Trace trace;
    Value output;
  };

  /// One draw of f_e(input). Throws DomainMismatch when the input lacks a
  /// component the agent needs.
  Draw sample(const Value& input, SplitMix64& rng) const;

  double loss(const Trace& trace) const noexcept;

  /// Losses of one draw per input, sample i using stream (key, i).
  void draw_losses(std::span<const Value> inputs, StreamKey key, std::span<double> losses) const;

  /// Outputs of the same draws `draw_losses` makes for the same key.
  void draw_outputs(std::span<const Value> inputs, StreamKey key, std::span<Value> outputs) const;

 private:
  AgentSpec spec_;
};

/// Samples the initial distribution with stream (key, i) for sample i.
void draw_initial(const InitialSpec& spec, StreamKey key, std::span<Value> out);

/// Convenience wrappers matching the edge-level operations.
inline EdgeModel::Draw sample_edge(const EdgeModel& edge, const Value& input, SplitMix64& rng) {
  return edge.sample(input, rng);
}
inline double loss_of(const EdgeModel& edge, const Trace& trace) noexcept {
  return edge.loss(trace);
}

}  // namespace agentvar
