# -*- encoding: utf-8 -*-
"""
gricci Verify - Monte-Carlo and quadrature checks of the boundary integrals.

Usage:
    from gricci.geometry import CutoffSpec
    from gricci.verify import horizontal_bump, lemma_lhs, lemma_rhs

    alpha = horizontal_bump()
    estimate = lemma_lhs(alpha, alpha, CutoffSpec("1"), CutoffSpec("2"), n=100_000, seed=1)
"""

from gricci.verify.convergence import (
    ConvergenceResult,
    PropagatorKind,
    convergence_scan,
    default_edges,
    loop_integrand,
    shell_integral,
    tube_radius,
)
from gricci.verify.exterior import ExteriorForm, wedge_all
from gricci.verify.forms import TestForm, area_bump, horizontal_bump, scalar_bump
from gricci.verify.lemma import (
    CHART_ORIENTATION,
    ScalingFit,
    StabilityReport,
    boundary_integral,
    boundary_pairing,
    chart_points,
    courant_lhs,
    courant_rhs,
    lemma_lhs,
    lemma_rhs,
    prefactor_ratio,
    stability_check,
    stderr_scaling,
)
from gricci.verify.sampler import BatchStats, MCEstimate, McRunner, pairwise_reduce

__all__ = [
    "ConvergenceResult",
    "PropagatorKind",
    "convergence_scan",
    "default_edges",
    "loop_integrand",
    "shell_integral",
    "tube_radius",
    "ExteriorForm",
    "wedge_all",
    "TestForm",
    "area_bump",
    "horizontal_bump",
    "scalar_bump",
    "CHART_ORIENTATION",
    "ScalingFit",
    "StabilityReport",
    "boundary_integral",
    "boundary_pairing",
    "chart_points",
    "courant_lhs",
    "courant_rhs",
    "lemma_lhs",
    "lemma_rhs",
    "prefactor_ratio",
    "stability_check",
    "stderr_scaling",
    "BatchStats",
    "MCEstimate",
    "McRunner",
    "pairwise_reduce",
]
