# -*- encoding: utf-8 -*-
"""
gricci Flow - the one-loop beta function, the RG flow of V+ and Courant data.

Usage:
    from gricci.flow import beta, integrate_flow, t_d

    T = t_d(alg, metric)
    trajectory = integrate_flow(alg, metric, (0.0, 1.0), ds0=0.05)
"""

from gricci.flow.beta import (
    FieldRedefinition,
    beta,
    beta_from_tensor,
    bivector_operator,
    block_residual,
    courant_t_dprime,
    field_redefinition,
    generalized_ricci,
    t_d,
    weyl_anomaly_coefficient,
)
from gricci.flow.courant import MAX_DEGREE, CourantData, exact_courant_data
from gricci.flow.integrator import (
    TABLEAUX,
    FlowDirection,
    FlowScheme,
    FlowState,
    dexpinv,
    flow_step,
    integrate_flow,
    make_state,
    rkmk_update,
)
from gricci.flow.master import (
    hamiltonian,
    master_equation_residual,
    poisson_bracket,
    poisson_square,
)

__all__ = [
    "FieldRedefinition",
    "beta",
    "beta_from_tensor",
    "bivector_operator",
    "block_residual",
    "courant_t_dprime",
    "field_redefinition",
    "generalized_ricci",
    "t_d",
    "weyl_anomaly_coefficient",
    "MAX_DEGREE",
    "CourantData",
    "exact_courant_data",
    "TABLEAUX",
    "FlowDirection",
    "FlowScheme",
    "FlowState",
    "dexpinv",
    "flow_step",
    "integrate_flow",
    "make_state",
    "rkmk_update",
    "hamiltonian",
    "master_equation_residual",
    "poisson_bracket",
    "poisson_square",
]
