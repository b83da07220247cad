// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace agentvar {

/// Stafford "mix13" finalizer used by SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Acklam's rational approximation to the standard normal quantile, relative
/// error below 1.2e-9 on (0, 1). Only the tails need a logarithm.
inline double approx_normal_quantile(double p) noexcept {
  constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                          1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                          6.680131188771972e+01,  -1.328068155288572e+01};
  constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                          -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                          3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (p < low) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p <= 1 - low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  const double q = std::sqrt(-2 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

/// SplitMix64 stream. Cheap to construct, so every logical draw in the
/// library gets its own instance derived from a label tuple.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double low, double high) noexcept {
    return low + (high - low) * uniform();
  }

  /// Standard normal by inversion of one uniform (see approx_normal_quantile).
  double normal() noexcept;

  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

  std::uint64_t state() const noexcept { return state_; }

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t state_;
};

inline double SplitMix64::normal() noexcept { return approx_normal_quantile(uniform()); }

/// Edge label used for the initial distribution at the source.
inline constexpr std::uint64_t kInitialStream = 0xffffffffffffffffULL;

/// Purpose of a draw. Each purpose owns a disjoint part of the label space.
enum class Context : std::uint8_t {
  kBucket = 1,      // DP inner loop, labels (target bucket, predecessor bucket)
  kBucketMemo = 2,  // DP with draw reuse, labels (predecessor bucket, 0)
  kInitial = 3,     // DP source row
  kBaseline = 4,    // baseline rollouts, labels (path index, 0)
  kCoverage = 5,    // fresh evaluation rollouts
  kUser = 6,        // free for callers and tests
};

struct ContextTag {
  Context kind = Context::kUser;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  friend constexpr bool operator==(const ContextTag&, const ContextTag&) = default;
};

/// Master seed of an experiment.
struct SeedDerivation {
  std::uint64_t master_seed = 0;
};

/// Hash of (master seed, edge, context). Combined with a sample index it
/// names one independent stream.
struct StreamKey {
  std::uint64_t value = 0;
};

constexpr StreamKey derive_key(SeedDerivation seed, std::uint64_t edge, ContextTag tag) noexcept {
  std::uint64_t h = mix64(seed.master_seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h + SplitMix64::kGolden + edge);
  const std::uint64_t labels = (static_cast<std::uint64_t>(tag.a) << 32) | tag.b;
  h = mix64(h + SplitMix64::kGolden + static_cast<std::uint64_t>(tag.kind));
  h = mix64(h + SplitMix64::kGolden + labels);
  return StreamKey{h};
}

constexpr SplitMix64 derive_rng(StreamKey key, std::uint64_t index) noexcept {
  return SplitMix64(mix64(key.value ^ mix64(index + 0x3c6ef372fe94f82bULL)));
}

constexpr SplitMix64 derive_rng(SeedDerivation seed, std::uint64_t edge, ContextTag tag,
                                std::uint64_t index) noexcept {
  return derive_rng(derive_key(seed, edge, tag), index);
}

}  // namespace agentvar
