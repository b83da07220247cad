// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agentvar {

enum class ErrorCode {
  kCycleDetected,
  kUnreachableVertex,
  kDeadEndVertex,
  kMissingSourceOrTerminal,
  kInvalidGraph,
  kPathBudgetExceeded,
  kInvalidParams,
  kInvalidConfig,
  kEmptySamples,
  kDomainMismatch,
  kUnsupportedEdgeKind,
  kNotAPath,
  kGraphMismatch,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `code()` identifies the category;
/// `subject()` carries the offending vertex id, edge list or file name when
/// one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace agentvar
