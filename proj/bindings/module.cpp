// Copyright 2026 The agentvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "agentvar/baseline.hpp"
#include "agentvar/benchgen.hpp"
#include "agentvar/bucketed_var.hpp"
#include "agentvar/error.hpp"
#include "agentvar/eval.hpp"
#include "agentvar/io.hpp"
#include "agentvar/quantile.hpp"

namespace py = pybind11;
namespace av = agentvar;

namespace {

av::RiskConfig make_config(double alpha, std::size_t buckets, std::size_t samples, double delta,
                           std::uint64_t seed) {
  av::RiskConfig c;
  c.alpha = alpha;
  c.buckets = buckets;
  c.samples = samples;
  c.delta = delta;
  c.seed = seed;
  return c;
}

av::Path to_path(const std::vector<std::string>& v) { return av::Path{v}; }

}  // namespace

PYBIND11_MODULE(_agentvar, m) {
  m.doc() = "Minimum value-at-risk composition of stochastic agents";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<av::Error>(m, "Error", PyExc_RuntimeError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const av::Error& e) {
      const py::object& type = error_type.get_stored();
      py::object instance = type(e.what());
      instance.attr("code") = std::string(av::to_string(e.code()));
      instance.attr("subject") = e.subject();
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  py::class_<av::AgentGraph>(m, "Graph")
      .def_static("from_json", &av::io::parse_graph, py::arg("text"), py::arg("base_dir") = "")
      .def_static("load", &av::io::load_graph, py::arg("path"))
      .def("to_json", &av::io::dump_graph)
      .def("save", [](const av::AgentGraph& g, const std::string& path) { av::io::save_graph(g, path); })
      .def("validate", [](const av::AgentGraph& g) { av::validate(g); })
      .def_property_readonly("hash", &av::io::graph_hash)
      .def_property_readonly("vertices", &av::AgentGraph::vertex_ids)
      .def_property_readonly("source", &av::AgentGraph::source_id)
      .def_property_readonly("terminal", &av::AgentGraph::terminal_id)
      .def_property_readonly("num_edges", &av::AgentGraph::edge_count)
      .def("paths",
           [](const av::AgentGraph& g, std::size_t cap) {
             std::vector<std::vector<std::string>> out;
             for (auto& p : av::enumerate_paths(g, cap)) out.push_back(std::move(p.vertices));
             return out;
           },
           py::arg("cap") = av::kDefaultPathCap)
      .def("__repr__", [](const av::AgentGraph& g) {
        return "<Graph " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) +
               " edges>";
      });

  m.def("make_benchmark", &av::make_benchmark, py::arg("family"),
        py::arg("params") = std::map<std::string, std::string>{},
        "Build a benchmark family; parameter values are strings, as on the command line.");

  py::class_<av::VarResult>(m, "Result")
      .def_property_readonly("algorithm", [](const av::VarResult& r) { return std::string(av::to_string(r.algorithm)); })
      .def_readonly("estimate", &av::VarResult::estimate)
      .def_property_readonly("path", [](const av::VarResult& r) { return r.path.vertices; })
      .def_readonly("allocation", &av::VarResult::allocation)
      .def_property_readonly("quantile_evaluations",
                             [](const av::VarResult& r) { return r.diagnostics.quantile_evaluations; })
      .def_property_readonly("predicted_quantile_evaluations",
                             [](const av::VarResult& r) { return r.diagnostics.predicted_quantile_evaluations; })
      .def_property_readonly("wall_seconds", [](const av::VarResult& r) { return r.diagnostics.wall_seconds; })
      .def_property_readonly("per_path",
                             [](const av::VarResult& r) {
                               std::vector<std::pair<std::vector<std::string>, double>> out;
                               for (const auto& p : r.per_path) out.emplace_back(p.path.vertices, p.q);
                               return out;
                             })
      .def("allocation_string", &av::report_allocation)
      .def("to_json", &av::io::dump_result, py::arg("graph_hash"), py::arg("all_paths") = false);

  m.def(
      "bucketed_var",
      [](const av::AgentGraph& g, double alpha, std::size_t buckets, std::size_t samples, double delta,
         std::uint64_t seed, bool memoize, unsigned threads) {
        const auto c = make_config(alpha, buckets, samples, delta, seed);
        py::gil_scoped_release release;
        return av::bucketed_var(g, c, av::BucketedOptions{memoize, threads});
      },
      py::arg("graph"), py::arg("alpha") = 0.1, py::arg("buckets") = 100, py::arg("samples") = 10'000,
      py::arg("delta") = 0.05, py::arg("seed") = 0, py::arg("memoize") = false, py::arg("threads") = 1);

  m.def(
      "baseline_var",
      [](const av::AgentGraph& g, double alpha, std::size_t samples, std::uint64_t seed, std::size_t path_cap) {
        const auto c = make_config(alpha, 100, samples, 0.05, seed);
        py::gil_scoped_release release;
        return av::baseline_var(g, c, path_cap);
      },
      py::arg("graph"), py::arg("alpha") = 0.1, py::arg("samples") = 10'000, py::arg("seed") = 0,
      py::arg("path_cap") = av::kDefaultPathCap);

  py::class_<av::CoverageReport>(m, "Coverage")
      .def_readonly("estimate", &av::CoverageReport::estimate)
      .def_readonly("samples", &av::CoverageReport::samples)
      .def_readonly("covered", &av::CoverageReport::covered)
      .def_readonly("coverage", &av::CoverageReport::coverage)
      .def_readonly("ci", &av::CoverageReport::ci)
      .def_readonly("target", &av::CoverageReport::target);

  m.def(
      "coverage",
      [](const av::AgentGraph& g, const std::vector<std::string>& path, double q, std::size_t n, std::uint64_t seed,
         double alpha) {
        py::gil_scoped_release release;
        return av::coverage(g, to_path(path), q, n, seed, alpha);
      },
      py::arg("graph"), py::arg("path"), py::arg("q"), py::arg("n") = 10'000, py::arg("seed") = 0,
      py::arg("alpha") = 0.1);

  m.def(
      "analytic_var",
      [](const av::AgentGraph& g, const std::vector<std::string>& path, double level) {
        return av::AnalyticOracle(g).var(to_path(path), level);
      },
      py::arg("graph"), py::arg("path"), py::arg("level"));

  m.def(
      "empirical_quantile",
      [](std::vector<double> xs, double level) { return av::select_quantile(xs, level); }, py::arg("samples"),
      py::arg("level"));
  m.def("dkw_gamma", &av::dkw_gamma, py::arg("num_vertices"), py::arg("n"), py::arg("d"), py::arg("delta"));
  m.def("clopper_pearson", &av::clopper_pearson, py::arg("successes"), py::arg("trials"),
        py::arg("confidence") = 0.95);
}
