# Copyright 2026 The agentvar Authors
# SPDX-License-Identifier: Apache-2.0
"""Minimum value-at-risk composition of stochastic agents."""

from ._agentvar import (
    Coverage,
    Error,
    Graph,
    Result,
    analytic_var,
    baseline_var,
    bucketed_var,
    clopper_pearson,
    coverage,
    dkw_gamma,
    empirical_quantile,
    make_benchmark,
)

__all__ = [
    "Coverage",
    "Error",
    "Graph",
    "Result",
    "analytic_var",
    "baseline_var",
    "bucketed_var",
    "clopper_pearson",
    "coverage",
    "dkw_gamma",
    "empirical_quantile",
    "make_benchmark",
]
