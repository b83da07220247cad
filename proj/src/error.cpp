// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/error.hpp"

namespace agentvar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnreachableVertex: return "UnreachableVertex";
    case ErrorCode::kDeadEndVertex: return "DeadEndVertex";
    case ErrorCode::kMissingSourceOrTerminal: return "MissingSourceOrTerminal";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kPathBudgetExceeded: return "PathBudgetExceeded";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptySamples: return "EmptySamples";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kUnsupportedEdgeKind: return "UnsupportedEdgeKind";
    case ErrorCode::kNotAPath: return "NotAPath";
    case ErrorCode::kGraphMismatch: return "GraphMismatch";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string subject)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace agentvar
