// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace agentvar {

struct RiskConfig {
  double alpha = 0.1;
  std::size_t buckets = 100;
  std::size_t samples = 10'000;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::size_t coverage_samples = 10'000;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

}  // namespace agentvar
