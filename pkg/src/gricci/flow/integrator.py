# -*- encoding: utf-8 -*-
"""
gricci Flow Integrator - Runge-Kutta-Munthe-Kaas integration of the RG flow of V+.

The flow in s = log(epsilon) is

    d tau / ds = [hbar B(tau), tau]

with B pairing-antisymmetric, so every update is a conjugation
tau -> exp(u) tau exp(-u) by a pairing-orthogonal map and the generalized
metric conditions hold to roundoff. Stages follow an explicit Butcher tableau
in the Lie algebra of pairing-antisymmetric operators.

Usage:
    from gricci.flow import integrate_flow

    trajectory = integrate_flow(alg, metric0, (0.0, 1.0), ds0=0.05, hbar=1.0)
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg

from gricci.algebra import GeneralizedMetric, QuadraticLieAlgebra, check_metric
from gricci.config import DEFAULT_TOLERANCES, Tolerances
from gricci.exceptions import StepUnderflow, ValidationError
from gricci.flow.beta import beta, t_d

logger = logging.getLogger(__name__)


class FlowScheme(str, Enum):
    """Integration schemes."""
    LIE_EULER = "lie_euler"
    RKMK4 = "rkmk4"


class FlowDirection(str, Enum):
    """Direction in s = log(epsilon); the UV limit is s -> -infinity."""
    TOWARD_IR = "toward_ir"
    TOWARD_UV = "toward_uv"

    @property
    def sign(self) -> float:
        return 1.0 if self is FlowDirection.TOWARD_IR else -1.0


# Explicit Butcher tableaux (a, b)
TABLEAUX = {
    FlowScheme.LIE_EULER: (np.zeros((1, 1)), np.array([1.0])),
    FlowScheme.RKMK4: (
        np.array([
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]),
        np.array([1.0, 2.0, 2.0, 1.0]) / 6.0,
    ),
}


@dataclass(frozen=True, eq=False)
class FlowState:
    """
    One accepted point of a trajectory.

    Attributes:
        s: log-scale parameter
        metric: Generalized metric at s
        residual: Frobenius norm of T_D at s
    """
    s: float
    metric: GeneralizedMetric
    residual: float

    def to_row(self) -> list[float]:
        """CSV row: s, residual, tau row-major."""
        return [self.s, self.residual] + self.metric.tau.ravel().tolist()


def make_state(alg: QuadraticLieAlgebra, s: float, metric: GeneralizedMetric) -> FlowState:
    return FlowState(s, metric, float(np.linalg.norm(t_d(alg, metric))))


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def dexpinv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Inverse derivative of exp truncated after the double commutator."""
    uv = _commutator(u, v)
    return v - 0.5 * uv + _commutator(u, uv) / 12.0


def _conjugate(u: np.ndarray, tau: np.ndarray) -> np.ndarray:
    return scipy.linalg.expm(u) @ tau @ scipy.linalg.expm(-u)


def rkmk_update(
    alg: QuadraticLieAlgebra,
    tau: np.ndarray,
    ds: float,
    hbar: float,
    scheme: FlowScheme = FlowScheme.RKMK4,
) -> np.ndarray:
    """
    The Lie algebra element u of one step, tau_new = exp(u) tau exp(-u).

    Args:
        alg: Quadratic Lie algebra
        tau: Current involution
        ds: Step in s
        hbar: Coupling
        scheme: Butcher tableau to use

    Returns:
        Pairing-antisymmetric operator u
    """
    a, b = TABLEAUX[FlowScheme(scheme)]
    stages: list[np.ndarray] = []
    for i in range(len(b)):
        u_i = sum((a[i, j] * stages[j] for j in range(i)), np.zeros_like(tau))
        stage_tau = _conjugate(u_i, tau) if i else tau
        k = ds * hbar * beta(alg, GeneralizedMetric(stage_tau))
        stages.append(dexpinv(u_i, k) if i else k)
    return sum(b_i * k for b_i, k in zip(b, stages))


def flow_step(
    alg: QuadraticLieAlgebra,
    state: FlowState,
    ds: float,
    hbar: float = 1.0,
    scheme: FlowScheme = FlowScheme.RKMK4,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    ds_floor: float = 1e-8,
) -> FlowState:
    """
    Advance the flow by ds, halving the step while the result breaks the metric conditions.

    Args:
        alg: Quadratic Lie algebra
        state: Current state
        ds: Requested step (either sign, nonzero)
        hbar: Positive coupling
        scheme: Integration scheme
        tolerances: tolerances.flow bounds the accepted invariant drift
        ds_floor: Smallest step magnitude tried

    Returns:
        New FlowState at s + ds_taken

    Raises:
        StepUnderflow: If the step shrinks below ds_floor
    """
    if ds == 0:
        raise ValidationError("ds must be nonzero")
    if hbar <= 0:
        raise ValidationError(f"hbar must be positive, got {hbar}")
    step_tol = dataclasses.replace(tolerances, metric=tolerances.flow)
    while abs(ds) >= ds_floor:
        u = rkmk_update(alg, state.metric.tau, ds, hbar, scheme)
        tau = _conjugate(u, state.metric.tau)
        report = check_metric(alg, tau, step_tol)
        if report.passed and np.all(np.isfinite(tau)):
            return make_state(alg, state.s + ds, GeneralizedMetric(tau))
        logger.info("rejected step ds=%.3e at s=%.6g: %s", ds, state.s, report.failures)
        ds /= 2
    logger.warning("step underflow at s=%.6g (ds=%.3e)", state.s, ds)
    raise StepUnderflow(state.s, ds, 0)


def integrate_flow(
    alg: QuadraticLieAlgebra,
    metric0: GeneralizedMetric,
    s_span: tuple[float, float],
    ds0: float,
    hbar: float = 1.0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    scheme: FlowScheme = FlowScheme.RKMK4,
    ds_floor: float = 1e-8,
    max_steps: Optional[int] = None,
    direction: Optional[FlowDirection] = None,
) -> list[FlowState]:
    """
    Integrate the flow from s_span[0] to s_span[1].

    The step magnitude is |ds0|, its sign follows the span; the last step is
    shortened to land on s_span[1]. A given direction must agree with the span.

    Returns:
        Trajectory of accepted states, monotone in s

    Raises:
        ValidationError: If the span runs against direction
        StepUnderflow: With .trajectory holding the truncated trajectory
    """
    s0, s1 = float(s_span[0]), float(s_span[1])
    if direction is not None and FlowDirection(direction).sign * (s1 - s0) < 0:
        raise ValidationError(f"s_span {s0}:{s1} runs against direction {FlowDirection(direction).value}")
    sign = 1.0 if s1 >= s0 else -1.0
    step = sign * abs(ds0)
    trajectory = [make_state(alg, s0, metric0)]
    steps = 0
    while sign * (s1 - trajectory[-1].s) > 1e-12 * max(1.0, abs(s1)):
        remaining = s1 - trajectory[-1].s
        ds = step if abs(step) < abs(remaining) else remaining
        try:
            trajectory.append(
                flow_step(alg, trajectory[-1], ds, hbar, scheme, tolerances, ds_floor)
            )
        except StepUnderflow as e:
            e.accepted = len(trajectory)
            e.trajectory = trajectory
            raise
        steps += 1
        if max_steps is not None and steps >= max_steps:
            break
    logger.info("flow finished at s=%.6g after %d steps", trajectory[-1].s, steps)
    return trajectory
