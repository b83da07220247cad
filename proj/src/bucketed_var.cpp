// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include "agentvar/bucketed_var.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <memory>
#include <thread>

#include "agentvar/error.hpp"
#include "agentvar/quantile.hpp"
#include "agentvar/rng.hpp"

namespace agentvar {

void RiskConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (buckets < 1) fail("buckets must be >= 1");
  if (buckets > std::numeric_limits<std::uint32_t>::max() - 1) fail("too many buckets");
  if (samples < 1) fail("samples must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (coverage_samples < 1) fail("coverage samples must be >= 1");
}

std::string_view to_string(Algorithm a) {
  return a == Algorithm::kBucketed ? "bucketed" : "baseline";
}

BucketTable::BucketTable(std::size_t vertices, std::size_t buckets, VertexIndex source)
    : buckets_(buckets),
      source_(source),
      var_(vertices * (buckets + 1), std::numeric_limits<double>::infinity()),
      parent_(vertices * (buckets + 1)) {}

void BucketTable::set(VertexIndex v, std::size_t b, double value, std::optional<Parent> parent) {
  var_.at(v * (buckets_ + 1) + b) = value;
  parent_.at(v * (buckets_ + 1) + b) = parent;
}

Path BucketTable::path_to(const AgentGraph& graph, VertexIndex v, std::size_t b) const {
  std::vector<std::string> rev{graph.id(v)};
  while (v != source_) {
    const auto& p = parent(v, b);
    if (!p) throw Error(ErrorCode::kNotAPath, "cell (" + graph.id(v) + ", " + std::to_string(b) + ") was never filled");
    v = graph.edge_from(p->edge);
    b = p->bucket;
    rev.push_back(graph.id(v));
  }
  return Path{std::vector<std::string>(rev.rbegin(), rev.rend())};
}

std::vector<std::size_t> BucketTable::allocation_to(const AgentGraph& graph, VertexIndex v, std::size_t b) const {
  std::vector<std::size_t> rev;
  while (v != source_) {
    const auto& p = parent(v, b);
    if (!p) throw Error(ErrorCode::kNotAPath, "cell (" + graph.id(v) + ", " + std::to_string(b) + ") was never filled");
    rev.push_back(b - p->bucket);
    v = graph.edge_from(p->edge);
    b = p->bucket;
  }
  return {rev.rbegin(), rev.rend()};
}

std::size_t predicted_quantile_evaluations(const AgentGraph& graph, std::size_t buckets) {
  const auto s = graph.source();
  const std::size_t row = buckets + 1;
  const std::size_t triangle = row * (row + 1) / 2;
  std::size_t total = 0;
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    total += (s && graph.edge_from(e) == *s) ? row : triangle;
  }
  return total;
}

namespace {

using Samples = std::shared_ptr<const std::vector<Value>>;

struct CellWork {
  const AgentGraph& graph;
  const RiskConfig& config;
  const BucketTable& table;
  const std::vector<std::vector<Samples>>& samples;
  // memo[k][b']: sorted losses of predecessor edge k at predecessor bucket b'.
  const std::vector<std::vector<std::vector<double>>>* memo;
  VertexIndex v;
  VertexIndex source;
  SeedDerivation seed;
};

double edge_level(const RiskConfig& c, std::size_t budget_units) {
  return 1.0 - static_cast<double>(budget_units) * c.alpha / static_cast<double>(c.buckets);
}

ContextTag cell_tag(bool memo, std::size_t target, std::size_t from) {
  return memo ? ContextTag{Context::kBucketMemo, static_cast<std::uint32_t>(from), 0}
              : ContextTag{Context::kBucket, static_cast<std::uint32_t>(target), static_cast<std::uint32_t>(from)};
}

struct CellResult {
  double value = std::numeric_limits<double>::infinity();
  std::optional<BucketTable::Parent> parent;
  Samples outputs;
  std::size_t evaluations = 0;
};

CellResult solve_cell(const CellWork& w, std::size_t target, bool keep_outputs, std::vector<double>& buffer) {
  CellResult r;
  const auto& preds = w.graph.in_edges(w.v);
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const EdgeIndex e = preds[k];
    const VertexIndex u = w.graph.edge_from(e);
    const std::size_t last = (u == w.source) ? 0 : target;
    for (std::size_t from = 0; from <= last; ++from) {
      const double level = edge_level(w.config, target - from);
      double edge_var;
      if (w.memo) {
        edge_var = sorted_quantile((*w.memo)[k][from], level);
      } else {
        const StreamKey key = derive_key(w.seed, e, cell_tag(false, target, from));
        w.graph.model(e).draw_losses(*w.samples[u][from], key, buffer);
        edge_var = select_quantile(buffer, level);
      }
      ++r.evaluations;
      const double path_var = std::max(w.table.var(u, from), edge_var);
      if (path_var < r.value) {
        r.value = path_var;
        r.parent = BucketTable::Parent{e, from};
      }
    }
  }
  if (keep_outputs && r.parent) {
    const EdgeIndex e = r.parent->edge;
    const VertexIndex u = w.graph.edge_from(e);
    const auto& inputs = *w.samples[u][r.parent->bucket];
    auto out = std::make_shared<std::vector<Value>>(inputs.size());
    const StreamKey key = derive_key(w.seed, e, cell_tag(w.memo != nullptr, target, r.parent->bucket));
    w.graph.model(e).draw_outputs(inputs, key, *out);
    r.outputs = std::move(out);
  }
  return r;
}

}  // namespace

BucketTable build_bucket_table(const AgentGraph& graph, const RiskConfig& config, const BucketedOptions& options) {
  config.validate();
  validate(graph);
  const VertexIndex s = *graph.source();
  const std::size_t d = config.buckets;
  const std::size_t n = config.samples;
  const SeedDerivation seed{config.seed};

  BucketTable table(graph.vertex_count(), d, s);
  for (std::size_t b = 0; b <= d; ++b) table.set(s, b, kNegInf, std::nullopt);

  std::vector<std::vector<Samples>> samples(graph.vertex_count());
  {
    auto initial = std::make_shared<std::vector<Value>>(n);
    draw_initial(graph.initial(), derive_key(seed, kInitialStream, {Context::kInitial, 0, 0}), *initial);
    samples[s].assign(d + 1, initial);
  }
  std::vector<std::size_t> pending(graph.vertex_count());
  for (VertexIndex v = 0; v < graph.vertex_count(); ++v) pending[v] = graph.out_edges(v).size();

  const unsigned threads = std::max(1u, options.threads);
  for (VertexIndex v : topological_order(graph)) {
    const auto& preds = graph.in_edges(v);

    std::vector<std::vector<std::vector<double>>> memo;
    if (options.memoize_draws) {
      memo.resize(preds.size());
      for (std::size_t k = 0; k < preds.size(); ++k) {
        const EdgeIndex e = preds[k];
        const VertexIndex u = graph.edge_from(e);
        const std::size_t last = (u == s) ? 0 : d;
        memo[k].resize(last + 1);
        for (std::size_t from = 0; from <= last; ++from) {
          auto& losses = memo[k][from];
          losses.resize(n);
          graph.model(e).draw_losses(*samples[u][from], derive_key(seed, e, cell_tag(true, 0, from)), losses);
          std::sort(losses.begin(), losses.end());
        }
      }
    }

    const CellWork work{graph, config, table, samples, options.memoize_draws ? &memo : nullptr, v, s, seed};
    const bool keep_outputs = !graph.out_edges(v).empty();
    std::vector<CellResult> results(d + 1);

    auto run_range = [&](std::size_t begin, std::size_t step) {
      std::vector<double> buffer(n);
      for (std::size_t b = begin; b <= d; b += step) results[b] = solve_cell(work, b, keep_outputs, buffer);
    };
    if (threads == 1) {
      run_range(0, 1);
    } else {
      std::vector<std::exception_ptr> errors(threads);
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            run_range(t, threads);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
    }

    if (keep_outputs) samples[v].resize(d + 1);
    for (std::size_t b = 0; b <= d; ++b) {
      table.set(v, b, results[b].value, results[b].parent);
      table.quantile_evaluations += results[b].evaluations;
      ++table.cells;
      if (keep_outputs) samples[v][b] = std::move(results[b].outputs);
    }
    for (EdgeIndex e : preds) {
      const VertexIndex u = graph.edge_from(e);
      if (--pending[u] == 0) samples[u].clear();
    }
  }
  return table;
}

VarResult bucketed_var(const AgentGraph& graph, const RiskConfig& config, const BucketedOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const BucketTable table = build_bucket_table(graph, config, options);
  const VertexIndex t = *graph.terminal();
  const std::size_t d = config.buckets;

  VarResult r;
  r.algorithm = Algorithm::kBucketed;
  r.estimate = table.var(t, d);
  r.path = table.path_to(graph, t, d);
  r.allocation = table.allocation_to(graph, t, d);
  r.config = config;
  r.memoized_draws = options.memoize_draws;
  r.diagnostics.cells = table.cells;
  r.diagnostics.quantile_evaluations = table.quantile_evaluations;
  r.diagnostics.predicted_quantile_evaluations = predicted_quantile_evaluations(graph, d);
  r.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_allocation(const VarResult& result) {
  if (result.path.edge_count() == 0) throw Error(ErrorCode::kNotAPath, "empty path has no allocation");
  if (!result.allocation) throw Error(ErrorCode::kNotAPath, "result carries no budget allocation");
  std::string out;
  for (std::size_t units : *result.allocation) {
    if (!out.empty()) out += ", ";
    out += std::to_string(units) + "ᾱ";
  }
  char unit[64];
  std::snprintf(unit, sizeof unit, "%g", result.config.alpha / static_cast<double>(result.config.buckets));
  return out + " (ᾱ=" + unit + ")";
}

}  // namespace agentvar
