// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "agentvar/graph.hpp"

namespace agentvar {

// Each generator takes either one spec per edge or a single spec that is
// broadcast to every edge.

/// v0 -> v1 -> ... -> vm.
AgentGraph make_chain(std::size_t m, std::span<const AgentSpec> specs, InitialSpec initial = {});

/// k diamonds in sequence: junctions j0..jk, upper branch vertices u1..uk,
/// lower branch vertices l1..lk. 3k+1 vertices, 4k edges, 2^k paths of 2k
/// edges. Spec order per diamond: j->u, u->j', j->l, l->j'.
AgentGraph make_diamond_sequence(std::size_t k, std::span<const AgentSpec> specs);

/// A shared prefix p0..pP followed by two disjoint branches (a*, b*) that
/// rejoin at t; `vertices` total, both paths with `length` edges. Spec order:
/// prefix edges, then branch a, then branch b.
AgentGraph make_two_path(std::size_t vertices, std::size_t length, std::span<const AgentSpec> specs);

/// Chain whose edges are the path's agents repeated k times. Repetitions are
/// distinct edges, so their draws are independent.
AgentGraph replicate_path(const AgentGraph& graph, const Path& path, std::size_t k);

/// Diamond s->{a,b}->t. Path s-a-t shares a standard normal latent factor with
/// correlation rho between its two gaussian losses; path s-b-t has two
/// independent N(gap, 1) losses.
AgentGraph make_correlated_diamond(double rho, double gap = 0.5);

// Shape-and-distribution stand-ins for the physical benchmarks.

/// One diamond with N(-0.40, 0.05) losses on the upper path and N(-0.30, 0.05)
/// on the lower one.
AgentGraph make_mousenav_analog();
/// Four diamonds (13 vertices, 16 paths of 8 edges) with negated-clearance
/// losses.
AgentGraph make_rooms16_analog();
/// Two paths of 5 edges over 7 vertices with small gaussian losses.
AgentGraph make_fetch_analog();
/// Box relay graph over vertices 0..9: -inf loss on moves without a box,
/// accumulated carry time on carrying moves.
AgentGraph make_box_relay_analog();

/// Builds a family from string parameters (the `gen` command). Families:
/// chain, diamond_sequence, two_path, replicated_path, correlated_diamond,
/// mousenav, rooms16, fetch, box_relay. Throws InvalidParams.
AgentGraph make_benchmark(const std::string& family, const std::map<std::string, std::string>& params);

}  // namespace agentvar
