# -*- encoding: utf-8 -*-
"""
gricci Beta Function - the eye diagram tensor, generalized Ricci tensor and B.

T_D is the tensor factor of the eye diagram, an element of V+ (x) V- stored as
the matrix T[u, v] of its upper indices. The beta function is the bivector
(T - T^T) / 2pi, returned as the operator B with <B v, w> = B(v (x) w), which
is antisymmetric for the pairing.

Usage:
    from gricci.flow import beta, t_d

    T = t_d(alg, metric)
    B = beta(alg, metric)
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from gricci.algebra import GeneralizedMetric, QuadraticLieAlgebra
from gricci.config import DEFAULT_TOLERANCES, Tolerances
from gricci.diagrams import contract, contract_courant, eye_diagram, ggric_diagrams
from gricci.exceptions import ValidationError
from gricci.flow.courant import CourantData

logger = logging.getLogger(__name__)

_EYE = eye_diagram()


def block_residual(tensor: np.ndarray, metric: GeneralizedMetric) -> float:
    """Largest component of T outside V+ (x) V-."""
    return float(max(np.max(np.abs(metric.pminus @ tensor)), np.max(np.abs(tensor @ metric.pplus.T))))


def t_d(
    alg: QuadraticLieAlgebra,
    metric: GeneralizedMetric,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """
    Tensor factor of the eye diagram as an n x n matrix in V+ (x) V-.

    Args:
        alg: Quadratic Lie algebra
        metric: Generalized metric
        tolerances: Used for the block structure check

    Returns:
        Matrix T[u, v], first slot in V+, second slot in V-
    """
    tensor = contract(_EYE, alg, metric)
    residual = block_residual(tensor, metric)
    scale = max(1.0, float(np.max(np.abs(tensor))))
    if residual > tolerances.metric * scale:
        logger.warning("T_D leaves V+ (x) V- by %.3e", residual)
    return tensor


def generalized_ricci(
    alg: QuadraticLieAlgebra,
    metric: GeneralizedMetric,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """The generalized Ricci tensor -T_D."""
    return -t_d(alg, metric, tolerances)


def bivector_operator(alg: QuadraticLieAlgebra, bivector: np.ndarray) -> np.ndarray:
    """
    Operator of an element R of g (x) g defined by <R v, w> = R(v (x) w).

    With R given by its upper indices, (R v)^b = R^{ab} eta_{ac} v^c.
    """
    return bivector.T @ alg.pairing


def beta_from_tensor(alg: QuadraticLieAlgebra, tensor: np.ndarray) -> np.ndarray:
    """B = (T - T^op) / 2pi as a pairing-antisymmetric operator."""
    return bivector_operator(alg, (tensor - tensor.T) / (2 * math.pi))


def beta(alg: QuadraticLieAlgebra, metric: GeneralizedMetric) -> np.ndarray:
    """
    The one-loop beta function B = (T_D - T_D^op) / 2pi.

    Returns:
        n x n operator, antisymmetric for the pairing, exchanging V+ and V-
    """
    return beta_from_tensor(alg, t_d(alg, metric))


def courant_t_dprime(cdata: CourantData, x: np.ndarray, metric: GeneralizedMetric) -> np.ndarray:
    """
    T_D' at x: the eye diagram plus or minus half the anchor loops.

    With rho = 0 and constant c this is exactly t_d of the underlying algebra.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros((cdata.fiber_dim, cdata.fiber_dim))
    for coefficient, graph in ggric_diagrams():
        if coefficient == 0:
            continue
        total = total + float(coefficient) * contract_courant(graph, cdata, x, metric)
    return total


def weyl_anomaly_coefficient(
    alg: QuadraticLieAlgebra,
    metric: GeneralizedMetric,
    ell1: float,
    ell2: float,
    hbar: float = 1.0,
) -> np.ndarray:
    """
    Scale dependence of the one-loop effective action for a constant cutoff ratio.

    S(eps l1) - S(eps l2) tends to the integral over the sphere of
    <W, A+ A-> with W = -(hbar / 2pi) log(l1 / l2) T_D.
    """
    if ell1 <= 0 or ell2 <= 0:
        raise ValidationError(f"cutoff scales must be positive, got {ell1}, {ell2}")
    return -(hbar / (2 * math.pi)) * math.log(ell1 / ell2) * t_d(alg, metric)


@dataclass(frozen=True, eq=False)
class FieldRedefinition:
    """
    The map 1 + delta hbar B absorbing a change delta of log cutoff into V+.

    Attributes:
        operator: 1 + delta hbar B
        generator: hbar B
        orthogonality_defect: max |g^T eta g - eta|, second order in delta
    """
    operator: np.ndarray
    generator: np.ndarray
    orthogonality_defect: float

    def apply(self, metric: GeneralizedMetric) -> GeneralizedMetric:
        """First-order image of the metric, g tau g^{-1}."""
        return GeneralizedMetric(self.operator @ metric.tau @ np.linalg.inv(self.operator))


def field_redefinition(
    alg: QuadraticLieAlgebra,
    metric: GeneralizedMetric,
    delta_log_ell: float,
    hbar: float = 1.0,
) -> FieldRedefinition:
    """
    Deformation of V+ compensating a shift delta_log_ell of the log cutoff scale.

    Args:
        alg: Quadratic Lie algebra
        metric: Current generalized metric
        delta_log_ell: Change of log(epsilon)
        hbar: Coupling

    Returns:
        FieldRedefinition
    """
    generator = hbar * beta(alg, metric)
    g = np.eye(alg.dim) + delta_log_ell * generator
    defect = float(np.max(np.abs(g.T @ alg.pairing @ g - alg.pairing)))
    return FieldRedefinition(g, generator, defect)
