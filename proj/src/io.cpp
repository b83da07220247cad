// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/io.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "agentvar/error.hpp"

namespace agentvar::io {

using Json = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

Json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double as_real(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kPosInf;
    if (s == "-inf") return kNegInf;
  }
  parse_error(what + ": expected a number");
}

std::uint64_t as_count(const Json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  parse_error(what + ": expected a non-negative integer");
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) parse_error(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing '" + key + "'");
  return *it;
}

std::string as_string(const Json& j, const std::string& what) {
  if (!j.is_string()) parse_error(what + ": expected a string");
  return j.get<std::string>();
}

double opt_real(const Json& obj, const std::string& key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_real(*it, where + "." + key);
}

std::string normalise_kind(std::string kind) {
  for (char& c : kind) {
    if (c == '_') c = '-';
  }
  return kind;
}

// Keys each kind accepts on top of the agent-level ones.
const std::set<std::string>& kind_keys(const std::string& kind, const std::string& where) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"constant", {"value"}},
      {"uniform", {"low", "high"}},
      {"gaussian", {"mu", "sigma"}},
      {"exponential", {"rate", "shift"}},
      {"shifted-min-distance", {"shift", "scale", "steps"}},
      {"latent-correlated", {"role", "rho", "mu", "sigma"}},
      {"empirical", {"file"}},
  };
  const auto it = table.find(kind);
  if (it == table.end()) parse_error(where + ": unknown kind '" + kind + "'");
  return it->second;
}

Distribution parse_distribution(const Json& j, const std::string& where, const std::string& base_dir,
                                const std::set<std::string>& extra_keys) {
  const std::string kind = normalise_kind(as_string(field(j, "kind", where), where + ".kind"));
  const auto& keys = kind_keys(kind, where);
  for (const auto& [k, _] : j.items()) {
    if (k != "kind" && !keys.count(k) && !extra_keys.count(k)) parse_error(where + ": unknown key '" + k + "'");
  }
  auto r = [&](const char* key, double fallback) { return opt_real(j, key, fallback, where); };
  if (kind == "constant") return dist::Constant{r("value", 0.0)};
  if (kind == "uniform") return dist::Uniform{r("low", 0.0), r("high", 1.0)};
  if (kind == "gaussian") return dist::Gaussian{r("mu", 0.0), r("sigma", 1.0)};
  if (kind == "exponential") return dist::Exponential{r("rate", 1.0), r("shift", 0.0)};
  if (kind == "shifted-min-distance") {
    int steps = 1;
    if (j.contains("steps")) steps = static_cast<int>(as_count(j["steps"], where + ".steps"));
    return dist::ShiftedMinDistance{r("shift", 0.0), r("scale", 1.0), steps};
  }
  if (kind == "latent-correlated") {
    dist::LatentCorrelated lc;
    const std::string role = j.contains("role") ? as_string(j["role"], where + ".role") : "source";
    if (role == "source") {
      lc.role = dist::LatentRole::kSource;
    } else if (role == "follower") {
      lc.role = dist::LatentRole::kFollower;
    } else {
      parse_error(where + ".role: expected 'source' or 'follower'");
    }
    lc.rho = r("rho", 0.0);
    lc.mu = r("mu", 0.0);
    lc.sigma = r("sigma", 1.0);
    return lc;
  }
  return load_empirical(as_string(field(j, "file", where), where + ".file"), base_dir);
}

void put_distribution(Json& j, const Distribution& d) {
  j["kind"] = std::string(kind_name(d));
  std::visit(Overloaded{
                 [&](const dist::Constant& c) { j["value"] = real(c.value); },
                 [&](const dist::Uniform& u) {
                   j["low"] = u.low;
                   j["high"] = u.high;
                 },
                 [&](const dist::Gaussian& g) {
                   j["mu"] = g.mu;
                   j["sigma"] = g.sigma;
                 },
                 [&](const dist::Exponential& e) {
                   j["rate"] = e.rate;
                   j["shift"] = e.shift;
                 },
                 [&](const dist::ShiftedMinDistance& s) {
                   j["shift"] = s.shift;
                   j["scale"] = s.scale;
                   j["steps"] = s.steps;
                 },
                 [&](const dist::LatentCorrelated& l) {
                   j["role"] = l.role == dist::LatentRole::kSource ? "source" : "follower";
                   j["rho"] = l.rho;
                   j["mu"] = l.mu;
                   j["sigma"] = l.sigma;
                 },
                 [&](const dist::Empirical& e) { j["file"] = e.file; },
             },
             d);
}

AgentSpec parse_agent(const Json& j, const std::string& where, const std::string& base_dir) {
  static const std::set<std::string> agent_keys = {"output_rule", "output_value", "loss", "reset_carry"};
  AgentSpec spec;
  spec.distribution = parse_distribution(j, where, base_dir, agent_keys);
  if (j.contains("output_rule")) {
    const auto rule = as_string(j["output_rule"], where + ".output_rule");
    if (rule == "passthrough") {
      spec.output_rule = OutputRule::kPassthrough;
    } else if (rule == "constant") {
      spec.output_rule = OutputRule::kConstant;
    } else if (rule == "offset") {
      spec.output_rule = OutputRule::kOffset;
    } else {
      parse_error(where + ".output_rule: unknown rule '" + rule + "'");
    }
  }
  spec.output_value = opt_real(j, "output_value", 0.0, where);
  if (j.contains("loss")) {
    const auto loss = as_string(j["loss"], where + ".loss");
    if (loss == "identity") {
      spec.loss_rule = LossRule::kIdentity;
    } else if (loss == "neg_inf" || loss == "neg-inf") {
      spec.loss_rule = LossRule::kNegInf;
    } else if (loss == "cumulative") {
      spec.loss_rule = LossRule::kCumulative;
    } else {
      parse_error(where + ".loss: unknown rule '" + loss + "'");
    }
  }
  if (j.contains("reset_carry")) {
    if (!j["reset_carry"].is_boolean()) parse_error(where + ".reset_carry: expected a boolean");
    spec.reset_carry = j["reset_carry"].get<bool>();
  }
  return spec;
}

Json agent_json(const AgentSpec& spec) {
  Json j = Json::object();
  put_distribution(j, spec.distribution);
  switch (spec.output_rule) {
    case OutputRule::kPassthrough:
      j["output_rule"] = "passthrough";
      break;
    case OutputRule::kConstant:
      j["output_rule"] = "constant";
      break;
    case OutputRule::kOffset:
      j["output_rule"] = "offset";
      break;
  }
  if (spec.output_rule != OutputRule::kPassthrough) j["output_value"] = spec.output_value;
  if (spec.loss_rule == LossRule::kNegInf) j["loss"] = "neg_inf";
  if (spec.loss_rule == LossRule::kCumulative) j["loss"] = "cumulative";
  if (spec.reset_carry) j["reset_carry"] = true;
  return j;
}

Json graph_json(const AgentGraph& g) {
  Json j;
  j["vertices"] = g.vertex_ids();
  j["source"] = g.source_id();
  j["terminal"] = g.terminal_id();
  Json edges = Json::array();
  for (const EdgeDecl& e : g.edge_decls()) {
    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"agent", agent_json(e.agent)}});
  }
  j["edges"] = std::move(edges);
  Json init = Json::object();
  put_distribution(init, g.initial().distribution);
  j["initial"] = std::move(init);
  return j;
}

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(what + ": " + e.what());
  }
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array()) parse_error(what + ": expected a list");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(as_string(v, what));
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Pretty body with the header object spliced in as its own second line.
std::string with_header(const Json& body, double wall_seconds) {
  const Json header{{"timestamp", utc_timestamp()}, {"wall_seconds", wall_seconds}};
  std::string text = body.dump(2);
  const std::string line = "  \"header\": " + header.dump() + (body.empty() ? "\n" : ",\n");
  text.insert(text.find('\n') + 1, line);
  return text + "\n";
}

Json config_json(const RiskConfig& c) {
  return Json{{"alpha", c.alpha},       {"buckets", c.buckets}, {"samples", c.samples},
              {"delta", c.delta},       {"seed", c.seed},       {"coverage_samples", c.coverage_samples}};
}

RiskConfig parse_config(const Json& j) {
  const std::string w = "config";
  RiskConfig c;
  c.alpha = as_real(field(j, "alpha", w), w + ".alpha");
  c.buckets = as_count(field(j, "buckets", w), w + ".buckets");
  c.samples = as_count(field(j, "samples", w), w + ".samples");
  c.delta = as_real(field(j, "delta", w), w + ".delta");
  c.seed = as_count(field(j, "seed", w), w + ".seed");
  c.coverage_samples = as_count(field(j, "coverage_samples", w), w + ".coverage_samples");
  return c;
}

}  // namespace

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

AgentGraph parse_graph(std::string_view text, const std::string& base_dir) {
  const Json j = parse_json(text, "graph");
  const std::string w = "graph";
  for (const auto& [k, _] : j.items()) {
    if (k != "vertices" && k != "source" && k != "terminal" && k != "edges" && k != "initial") {
      parse_error("graph: unknown key '" + k + "'");
    }
  }
  auto vertices = string_list(field(j, "vertices", w), "vertices");
  const auto source = as_string(field(j, "source", w), "source");
  const auto terminal = as_string(field(j, "terminal", w), "terminal");
  const Json& ej = field(j, "edges", w);
  if (!ej.is_array()) parse_error("edges: expected a list");
  std::vector<EdgeDecl> edges;
  for (std::size_t i = 0; i < ej.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    for (const auto& [k, _] : ej[i].items()) {
      if (k != "from" && k != "to" && k != "agent") parse_error(where + ": unknown key '" + k + "'");
    }
    edges.push_back(EdgeDecl{as_string(field(ej[i], "from", where), where + ".from"),
                             as_string(field(ej[i], "to", where), where + ".to"),
                             parse_agent(field(ej[i], "agent", where), where + ".agent", base_dir)});
  }
  InitialSpec initial;
  if (j.contains("initial")) initial.distribution = parse_distribution(j["initial"], "initial", base_dir, {});
  return AgentGraph(std::move(vertices), std::move(edges), source, terminal, std::move(initial));
}

AgentGraph load_graph(const std::string& file) {
  return parse_graph(read_file(file), std::filesystem::path(file).parent_path().string());
}

std::string dump_graph(const AgentGraph& graph) { return graph_json(graph).dump(2) + "\n"; }

void save_graph(const AgentGraph& graph, const std::string& file) { write_file(file, dump_graph(graph)); }

std::string graph_hash(const AgentGraph& graph) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : graph_json(graph).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // Empirical samples are part of the graph's meaning, not just the file name.
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    if (const auto* emp = std::get_if<dist::Empirical>(&graph.model(e).spec().distribution)) {
      for (double v : *emp->values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
          h ^= (bits >> (8 * b)) & 0xff;
          h *= 0x100000001b3ULL;
        }
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump_result(const VarResult& r, const std::string& hash, bool all_paths) {
  Json j;
  j["format"] = "agentvar-result";
  j["graph_hash"] = hash;
  j["algorithm"] = std::string(to_string(r.algorithm));
  j["estimate"] = real(r.estimate);
  j["path"] = r.path.vertices;
  if (r.allocation) {
    j["allocation"] = *r.allocation;
    j["budget_unit"] = r.config.alpha / static_cast<double>(r.config.buckets);
  }
  j["config"] = config_json(r.config);
  j["memoized_draws"] = r.memoized_draws;
  j["diagnostics"] = Json{{"cells", r.diagnostics.cells},
                          {"quantile_evaluations", r.diagnostics.quantile_evaluations},
                          {"predicted_quantile_evaluations", r.diagnostics.predicted_quantile_evaluations}};
  if (all_paths) {
    Json rows = Json::array();
    for (const auto& p : r.per_path) rows.push_back(Json{{"path", p.path.vertices}, {"q", real(p.q)}, {"n", p.n}});
    j["per_path"] = std::move(rows);
  }
  return with_header(j, r.diagnostics.wall_seconds);
}

LoadedResult parse_result(std::string_view text) {
  const Json j = parse_json(text, "result");
  const std::string w = "result";
  LoadedResult out;
  out.graph_hash = as_string(field(j, "graph_hash", w), "graph_hash");
  VarResult& r = out.result;
  const auto algo = as_string(field(j, "algorithm", w), "algorithm");
  if (algo == "bucketed") {
    r.algorithm = Algorithm::kBucketed;
  } else if (algo == "baseline") {
    r.algorithm = Algorithm::kBaseline;
  } else {
    parse_error("algorithm: unknown '" + algo + "'");
  }
  r.estimate = as_real(field(j, "estimate", w), "estimate");
  r.path.vertices = string_list(field(j, "path", w), "path");
  if (j.contains("allocation")) {
    std::vector<std::size_t> alloc;
    for (const auto& v : j["allocation"]) alloc.push_back(as_count(v, "allocation"));
    r.allocation = std::move(alloc);
  }
  r.config = parse_config(field(j, "config", w));
  if (j.contains("memoized_draws")) r.memoized_draws = j["memoized_draws"].get<bool>();
  if (j.contains("diagnostics")) {
    const Json& d = j["diagnostics"];
    r.diagnostics.cells = as_count(field(d, "cells", "diagnostics"), "cells");
    r.diagnostics.quantile_evaluations = as_count(field(d, "quantile_evaluations", "diagnostics"), "quantile_evaluations");
    r.diagnostics.predicted_quantile_evaluations =
        as_count(field(d, "predicted_quantile_evaluations", "diagnostics"), "predicted_quantile_evaluations");
  }
  if (j.contains("header") && j["header"].contains("wall_seconds")) {
    r.diagnostics.wall_seconds = as_real(j["header"]["wall_seconds"], "header.wall_seconds");
  }
  if (j.contains("per_path")) {
    for (const auto& row : j["per_path"]) {
      r.per_path.push_back(PathEstimate{Path{string_list(field(row, "path", "per_path"), "per_path.path")},
                                        as_real(field(row, "q", "per_path"), "per_path.q"),
                                        as_count(field(row, "n", "per_path"), "per_path.n")});
    }
  }
  return out;
}

std::string dump_report(const CoverageReport& rep, const std::string& hash, double wall_seconds) {
  Json j;
  j["format"] = "agentvar-coverage";
  j["graph_hash"] = hash;
  j["estimate"] = real(rep.estimate);
  j["path"] = rep.path.vertices;
  j["samples"] = rep.samples;
  j["covered"] = rep.covered;
  j["coverage"] = rep.coverage;
  j["ci"] = Json::array({rep.ci.first, rep.ci.second});
  j["target"] = rep.target;
  if (rep.verdicts) {
    const TheoremVerdicts& v = *rep.verdicts;
    j["verdicts"] = Json{{"gamma", v.gamma},
                         {"thm1_threshold", real(v.thm1_threshold)},
                         {"thm1_lower_ok", v.thm1_lower_ok},
                         {"optimal_path", v.optimal_path.vertices},
                         {"optimal_var", real(v.optimal_var)},
                         {"thm2_ceiling", real(v.thm2_ceiling)},
                         {"slack", v.slack},
                         {"thm2_upper_ok", v.thm2_upper_ok}};
  }
  return with_header(j, wall_seconds);
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + file, file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& file, std::string_view contents) {
  const std::filesystem::path p(file);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + file, file);
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + file, file);
}

}  // namespace agentvar::io
