# Copyright 2026 The agentvar Authors
# SPDX-License-Identifier: Apache-2.0

import math

import pytest

import agentvar


def chain():
    return agentvar.make_benchmark("chain", {"m": "2", "dist": "uniform"})


def test_benchmark_shape():
    g = agentvar.make_benchmark("diamond_sequence", {"k": "4"})
    assert len(g.vertices) == 13
    assert g.num_edges == 16
    assert len(g.paths()) == 16


def test_graph_round_trip(tmp_path):
    g = chain()
    again = agentvar.Graph.from_json(g.to_json())
    assert again.hash == g.hash
    file = tmp_path / "g.json"
    g.save(str(file))
    assert agentvar.Graph.load(str(file)).hash == g.hash


def test_bucketed_and_baseline():
    g = chain()
    r = agentvar.bucketed_var(g, alpha=0.1, buckets=10, samples=2000, seed=1)
    assert r.algorithm == "bucketed"
    assert len(r.path) == 3 and r.path[0] == g.source and r.path[-1] == g.terminal
    assert sum(r.allocation) == 10
    assert r.quantile_evaluations == r.predicted_quantile_evaluations
    b = agentvar.baseline_var(g, alpha=0.1, samples=2000, seed=1)
    assert b.allocation is None
    assert 0.0 < b.estimate < 1.0
    assert '"format": "agentvar-result"' in r.to_json(g.hash)


def test_threads_do_not_change_result():
    g = agentvar.make_benchmark("diamond_sequence", {"k": "2"})
    one = agentvar.bucketed_var(g, buckets=8, samples=1000, seed=3, threads=1)
    many = agentvar.bucketed_var(g, buckets=8, samples=1000, seed=3, threads=3)
    assert one.estimate == many.estimate
    assert one.path == many.path and one.allocation == many.allocation


def test_coverage_and_oracle():
    g = chain()
    path = g.paths()[0]
    q = agentvar.analytic_var(g, path, 0.9)
    assert q == pytest.approx(math.sqrt(0.9), abs=1e-8)
    rep = agentvar.coverage(g, path, q, n=20000, seed=5, alpha=0.1)
    lo, hi = rep.ci
    assert lo <= 0.9 <= hi


def test_statistics():
    assert agentvar.empirical_quantile([4.0, 1.0, 3.0, 2.0], 0.5) == 2.0
    lo, hi = agentvar.clopper_pearson(8977, 10000)
    assert lo == pytest.approx(0.8915, abs=1e-3)
    assert hi == pytest.approx(0.9035, abs=1e-3)
    assert agentvar.dkw_gamma(10, 10000, 100, 0.05) > 0.0


def test_errors_carry_code():
    with pytest.raises(agentvar.Error) as info:
        agentvar.bucketed_var(chain(), alpha=1.5)
    assert info.value.code == "InvalidConfig"
    with pytest.raises(agentvar.Error) as info:
        agentvar.Graph.load("/nonexistent/graph.json")
    assert info.value.code == "Io"
