// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

// agentvar: generate agent graphs, estimate the minimum-VaR composition and
// check its coverage.
//
// Exit codes: 0 success, 2 invalid input, 3 path budget exceeded, 4 I/O.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentvar/baseline.hpp"
#include "agentvar/benchgen.hpp"
#include "agentvar/bucketed_var.hpp"
#include "agentvar/error.hpp"
#include "agentvar/eval.hpp"
#include "agentvar/io.hpp"

namespace av = agentvar;

namespace {

struct RunFlags {
  av::RiskConfig config;
  std::string algorithm = "bucketed";
  std::size_t path_cap = av::kDefaultPathCap;
  unsigned threads = 1;
  bool memoize = false;
};

void add_config_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--alpha", f.config.alpha, "risk level")->capture_default_str();
  cmd->add_option("--buckets", f.config.buckets, "number of budget buckets d")->capture_default_str();
  cmd->add_option("--samples", f.config.samples, "samples per quantile n")->capture_default_str();
  cmd->add_option("--delta", f.config.delta, "failure probability for the coverage bound")->capture_default_str();
  cmd->add_option("--seed", f.config.seed, "master seed")->capture_default_str();
  cmd->add_option("--coverage-samples", f.config.coverage_samples, "fresh samples for coverage")
      ->capture_default_str();
  cmd->add_option("--path-cap", f.path_cap, "baseline path enumeration limit")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (results do not depend on it)")->capture_default_str();
  cmd->add_flag("--memoize", f.memoize, "reuse edge draws across target buckets");
}

av::VarResult estimate(const av::AgentGraph& g, const RunFlags& f) {
  if (f.algorithm == "bucketed") return av::bucketed_var(g, f.config, av::BucketedOptions{f.memoize, f.threads});
  if (f.algorithm == "baseline") return av::baseline_var(g, f.config, f.path_cap);
  throw av::Error(av::ErrorCode::kInvalidParams, "unknown algorithm '" + f.algorithm + "'");
}

std::string join_path(const av::Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) s += (i ? " -> " : "") + p.vertices[i];
  return s;
}

// Bound checks apply only when the oracle covers every path.
std::optional<av::TheoremVerdicts> try_verdicts(const av::AgentGraph& g, const av::VarResult& r,
                                                const av::RiskConfig& config) {
  try {
    const av::AnalyticOracle oracle(g);
    for (const auto& p : av::enumerate_paths(g)) {
      if (!oracle.supports(p)) return std::nullopt;
    }
    return av::theorem_verdicts(r, oracle, config);
  } catch (const av::Error& e) {
    if (e.code() == av::ErrorCode::kPathBudgetExceeded) return std::nullopt;
    throw;
  }
}

std::string fmt(double v) { return av::io::format_real(v); }

int cmd_gen(const std::string& family, const std::vector<std::string>& kv, const std::string& out) {
  std::map<std::string, std::string> params;
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw av::Error(av::ErrorCode::kInvalidParams, "expected key=value, got '" + item + "'");
    }
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  const av::AgentGraph g = av::make_benchmark(family, params);
  av::validate(g);
  av::io::save_graph(g, out);
  std::cout << "vertices " << g.vertex_count() << "\nedges " << g.edge_count() << "\npaths "
            << av::count_paths(g) << "\n";
  return 0;
}

int cmd_run(const std::string& graph_file, const RunFlags& f, const std::string& out, bool all_paths) {
  const av::AgentGraph g = av::io::load_graph(graph_file);
  av::validate(g);
  const av::VarResult r = estimate(g, f);
  if (!out.empty()) av::io::write_file(out, av::io::dump_result(r, av::io::graph_hash(g), all_paths));
  std::cout << "algorithm " << av::to_string(r.algorithm) << "\n";
  std::cout << "q " << fmt(r.estimate) << "\n";
  std::cout << "path " << join_path(r.path) << "\n";
  if (r.allocation) std::cout << "allocation " << av::report_allocation(r) << "\n";
  if (all_paths) {
    for (const auto& p : r.per_path) std::cout << "  " << fmt(p.q) << "  " << join_path(p.path) << "\n";
  }
  std::cout << "quantile_evaluations " << r.diagnostics.quantile_evaluations << "\n";
  std::printf("seconds %.3f\n", r.diagnostics.wall_seconds);
  return 0;
}

int cmd_coverage(const std::string& graph_file, const std::string& result_file, std::optional<std::size_t> n,
                 std::optional<std::uint64_t> seed, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const av::AgentGraph g = av::io::load_graph(graph_file);
  av::validate(g);
  const av::io::LoadedResult loaded = av::io::parse_result(av::io::read_file(result_file));
  const std::string hash = av::io::graph_hash(g);
  if (loaded.graph_hash != hash) {
    throw av::Error(av::ErrorCode::kGraphMismatch,
                    "result was computed on graph " + loaded.graph_hash + ", not " + hash, result_file);
  }
  const av::VarResult& r = loaded.result;
  av::CoverageReport rep = av::coverage(g, r.path, r.estimate, n.value_or(r.config.coverage_samples),
                                        seed.value_or(r.config.seed), r.config.alpha);
  rep.verdicts = try_verdicts(g, r, r.config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.empty()) av::io::write_file(out, av::io::dump_report(rep, hash, secs));
  std::printf("coverage %.4f [%.4f, %.4f] target %.4f (N=%zu)\n", rep.coverage, rep.ci.first, rep.ci.second,
              rep.target, rep.samples);
  if (rep.verdicts) {
    const auto& v = *rep.verdicts;
    std::cout << "lower bound " << (v.thm1_lower_ok ? "ok" : "VIOLATED") << " (q " << fmt(r.estimate)
              << " vs " << fmt(v.thm1_threshold) << ")\n";
    std::cout << "upper bound " << (v.thm2_upper_ok ? "ok" : "VIOLATED") << " (q " << fmt(r.estimate)
              << " vs " << fmt(v.thm2_ceiling) << ")\n";
  }
  return 0;
}

int cmd_sweep(const std::string& kind, const std::vector<std::size_t>& values, const std::string& graph_file,
              RunFlags f, const std::string& out) {
  if (values.empty()) throw av::Error(av::ErrorCode::kInvalidParams, "sweep needs at least one value");
  if (kind != "samples" && kind != "buckets" && kind != "agents") {
    throw av::Error(av::ErrorCode::kInvalidParams, "unknown sweep '" + kind + "'");
  }
  const av::AgentGraph base = av::io::load_graph(graph_file);
  av::validate(base);
  std::optional<av::Path> base_path;
  if (kind == "agents") base_path = estimate(base, f).path;

  std::ostringstream csv;
  csv << "param,estimate,coverage,ci_lo,ci_hi,seconds\n";
  for (std::size_t v : values) {
    RunFlags row = f;
    std::optional<av::AgentGraph> replicated;
    if (kind == "samples") row.config.samples = v;
    if (kind == "buckets") row.config.buckets = v;
    if (kind == "agents") replicated = av::replicate_path(base, *base_path, v);
    const av::AgentGraph& g = replicated ? *replicated : base;
    const auto start = std::chrono::steady_clock::now();
    const av::VarResult r = estimate(g, row);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const av::CoverageReport rep =
        av::coverage(g, r.path, r.estimate, row.config.coverage_samples, row.config.seed, row.config.alpha);
    csv << v << ',' << fmt(r.estimate) << ',' << fmt(rep.coverage) << ',' << fmt(rep.ci.first) << ','
        << fmt(rep.ci.second) << ',' << fmt(secs) << '\n';
    std::printf("%s=%zu  q %s  coverage %.4f [%.4f, %.4f]  %.2fs\n", kind.c_str(), v, fmt(r.estimate).c_str(),
                rep.coverage, rep.ci.first, rep.ci.second, secs);
  }
  if (!out.empty()) av::io::write_file(out, csv.str());
  return 0;
}

int cmd_table(const std::vector<std::string>& graphs, RunFlags f, const std::string& out) {
  std::ostringstream csv;
  csv << "benchmark,alpha,buckets,bucketed,baseline,bucketed_coverage,bucketed_ci_lo,bucketed_ci_hi,"
         "baseline_coverage,baseline_ci_lo,baseline_ci_hi\n";
  for (const auto& file : graphs) {
    const av::AgentGraph g = av::io::load_graph(file);
    av::validate(g);
    const std::string name = std::filesystem::path(file).stem().string();
    csv << name << ',' << fmt(f.config.alpha) << ',' << f.config.buckets;
    std::vector<av::CoverageReport> reps;
    std::vector<double> qs;
    for (const char* algo : {"bucketed", "baseline"}) {
      RunFlags row = f;
      row.algorithm = algo;
      const av::VarResult r = estimate(g, row);
      qs.push_back(r.estimate);
      reps.push_back(av::coverage(g, r.path, r.estimate, f.config.coverage_samples, f.config.seed, f.config.alpha));
    }
    csv << ',' << fmt(qs[0]) << ',' << fmt(qs[1]);
    for (const auto& rep : reps) csv << ',' << fmt(rep.coverage) << ',' << fmt(rep.ci.first) << ',' << fmt(rep.ci.second);
    csv << '\n';
    std::printf("%-20s bucketed %s (%.2f%% [%.2f, %.2f])  baseline %s (%.2f%% [%.2f, %.2f])\n", name.c_str(),
                fmt(qs[0]).c_str(), 100 * reps[0].coverage, 100 * reps[0].ci.first, 100 * reps[0].ci.second,
                fmt(qs[1]).c_str(), 100 * reps[1].coverage, 100 * reps[1].ci.first, 100 * reps[1].ci.second);
  }
  if (!out.empty()) av::io::write_file(out, csv.str());
  return 0;
}

int exit_code(av::ErrorCode code) {
  switch (code) {
    case av::ErrorCode::kPathBudgetExceeded:
      return 3;
    case av::ErrorCode::kIo:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum value-at-risk agent composition"};
  app.require_subcommand(1);

  std::string family, out, graph_file, result_file, sweep_kind;
  std::vector<std::string> kv, graphs;
  std::vector<std::size_t> values;
  std::optional<std::size_t> cov_n;
  std::optional<std::uint64_t> cov_seed;
  bool all_paths = false;
  RunFlags flags;

  auto* gen = app.add_subcommand("gen", "write a benchmark graph");
  gen->add_option("family", family, "chain, diamond_sequence, two_path, replicated_path, correlated_diamond, "
                                    "mousenav, rooms16, fetch, box_relay")
      ->required();
  gen->add_option("params", kv, "key=value parameters");
  gen->add_option("--out", out, "graph file")->required();

  auto* run = app.add_subcommand("run", "estimate the minimum-VaR path");
  run->add_option("--graph", graph_file)->required();
  run->add_option("--algorithm", flags.algorithm)->check(CLI::IsMember({"bucketed", "baseline"}))->capture_default_str();
  run->add_option("--out", out, "result file");
  run->add_flag("--all-paths", all_paths, "report every path's estimate (baseline)");
  add_config_flags(run, flags);

  auto* cov = app.add_subcommand("coverage", "fresh-sample coverage of a result");
  cov->add_option("--graph", graph_file)->required();
  cov->add_option("--result", result_file)->required();
  cov->add_option("--coverage-samples", cov_n, "defaults to the result's setting");
  cov->add_option("--seed", cov_seed, "defaults to the result's seed");
  cov->add_option("--out", out, "report file");

  auto* sweep = app.add_subcommand("sweep", "coverage as one parameter varies");
  sweep->add_option("kind", sweep_kind, "samples, buckets or agents")->required();
  sweep->add_option("--values", values, "parameter values")->required();
  sweep->add_option("--graph", graph_file)->required();
  sweep->add_option("--algorithm", flags.algorithm)->check(CLI::IsMember({"bucketed", "baseline"}))->capture_default_str();
  sweep->add_option("--out", out, "CSV file");
  add_config_flags(sweep, flags);

  auto* table = app.add_subcommand("table", "both algorithms and their coverage, one row per graph");
  table->add_option("--graph", graphs)->required();
  table->add_option("--out", out, "CSV file");
  add_config_flags(table, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(family, kv, out);
    if (*run) return cmd_run(graph_file, flags, out, all_paths);
    if (*cov) return cmd_coverage(graph_file, result_file, cov_n, cov_seed, out);
    if (*sweep) return cmd_sweep(sweep_kind, values, graph_file, flags, out);
    if (*table) return cmd_table(graphs, flags, out);
  } catch (const av::Error& e) {
    std::cerr << "agentvar: " << e.what() << "\n";
    return exit_code(e.code());
  }
  return 0;
}
