// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "agentvar/eval.hpp"
#include "agentvar/graph.hpp"
#include "agentvar/result.hpp"

namespace agentvar::io {

// Graph files are JSON documents:
//
//   {"vertices": ["s", "t"], "source": "s", "terminal": "t",
//    "edges": [{"from": "s", "to": "t",
//               "agent": {"kind": "gaussian", "mu": 0, "sigma": 1}}],
//    "initial": {"kind": "constant", "value": 0}}
//
// Agent keys beside the kind's parameters: output_rule (passthrough,
// constant, offset), output_value, loss (identity, neg_inf, cumulative),
// reset_carry. Unknown keys are rejected. Empirical files are resolved
// relative to `base_dir`.
AgentGraph parse_graph(std::string_view text, const std::string& base_dir = {});
AgentGraph load_graph(const std::string& file);

/// Canonical form: vertices sorted, edges in (from, to) order, default-valued
/// agent keys omitted.
std::string dump_graph(const AgentGraph& graph);
void save_graph(const AgentGraph& graph, const std::string& file);

/// FNV-1a over the compact canonical dump, as 16 hex digits.
std::string graph_hash(const AgentGraph& graph);

// Result and report files keep run-dependent fields (timestamp, wall-clock
// seconds) on line 2 and nowhere else, so two runs with the same inputs match
// byte for byte once that line is dropped.

struct LoadedResult {
  VarResult result;
  std::string graph_hash;
};

std::string dump_result(const VarResult& result, const std::string& graph_hash, bool all_paths = false);
LoadedResult parse_result(std::string_view text);

std::string dump_report(const CoverageReport& report, const std::string& graph_hash, double wall_seconds = 0.0);

std::string read_file(const std::string& file);
/// Creates parent directories as needed.
void write_file(const std::string& file, std::string_view contents);

/// "-inf" / "inf" for the infinities, shortest round-trip decimal otherwise.
std::string format_real(double v);

}  // namespace agentvar::io
