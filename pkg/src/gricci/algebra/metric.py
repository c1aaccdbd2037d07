# -*- encoding: utf-8 -*-
"""
gricci Generalized Metrics - splittings g = V+ (+) V- stored as involutions.

A generalized metric is a pairing-symmetric involution tau whose +1 eigenspace
V+ carries a positive definite pairing and whose -1 eigenspace V- = V+^perp a
negative definite one. Equivalently <tau x, y> is a positive definite form.

Usage:
    from gricci.algebra import preset_algebra, random_metric, split_inverse

    alg = preset_algebra("su2_double")
    metric = random_metric(alg, seed=0, scale=0.1)
    split = split_inverse(alg, metric)
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.linalg

from gricci.algebra.lie import QuadraticLieAlgebra
from gricci.config import DEFAULT_TOLERANCES, Tolerances
from gricci.exceptions import AlgebraValidationError, MetricValidationError, ValidationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GeneralizedMetric:
    """
    A validated generalized metric.

    Attributes:
        tau: Involution with V+ / V- as its +1 / -1 eigenspaces
        pplus: Projector (I + tau) / 2 onto V+
        pminus: Projector (I - tau) / 2 onto V-
    """
    tau: np.ndarray
    pplus: np.ndarray = field(init=False, repr=False)
    pminus: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        tau = np.array(self.tau, dtype=float)
        tau.setflags(write=False)
        eye = np.eye(tau.shape[0])
        pplus = (eye + tau) / 2
        pminus = (eye - tau) / 2
        pplus.setflags(write=False)
        pminus.setflags(write=False)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "pplus", pplus)
        object.__setattr__(self, "pminus", pminus)

    @property
    def dim(self) -> int:
        return self.tau.shape[0]

    @property
    def rank_plus(self) -> int:
        return int(round(np.trace(self.pplus)))

    def positivity_margin(self, alg: QuadraticLieAlgebra) -> float:
        """Smallest eigenvalue of the symmetrized form <tau x, y>."""
        form = alg.pairing @ self.tau
        return float(np.min(np.linalg.eigvalsh((form + form.T) / 2)))

    def to_dict(self) -> dict:
        return {"tau": self.tau.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "GeneralizedMetric":
        return cls(np.array(data["tau"], dtype=float))


@dataclass(frozen=True, eq=False)
class SplitInversePairing:
    """
    The inverse pairing t = eta^{-1} split along V+ and V-.

    Attributes:
        t: eta^{-1}
        tplus: Component with range in V+
        tminus: t - tplus, range in V-
    """
    t: np.ndarray
    tplus: np.ndarray
    tminus: np.ndarray

    def for_sign(self, sign: str) -> np.ndarray:
        return self.tplus if sign == "plus" else self.tminus


def check_metric(
    alg: QuadraticLieAlgebra,
    tau: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ValidationReport:
    """
    Residuals of the generalized metric conditions for a candidate involution.

    Args:
        alg: Algebra whose pairing is used
        tau: Candidate involution
        tolerances: Tolerances to compare residuals against

    Returns:
        ValidationReport with involution, pairing symmetry, positivity and rank checks
    """
    tau = np.asarray(tau, dtype=float)
    report = ValidationReport(subject="metric", tolerance=tolerances.metric)
    if tau.shape != alg.pairing.shape:
        report.record("shape", float("inf"))
        return report
    eta = alg.pairing
    report.record("involution", np.max(np.abs(tau @ tau - np.eye(alg.dim))))
    report.record("pairing_symmetry", np.max(np.abs(eta @ tau - tau.T @ eta)))
    form = eta @ tau
    margin = float(np.min(np.linalg.eigvalsh((form + form.T) / 2)))
    report.residuals["positivity_margin"] = margin
    if not margin > tolerances.metric:
        report.failures.append("positivity_margin")
    rank_plus = int(round(np.trace((np.eye(alg.dim) + tau) / 2)))
    report.record("rank_plus", abs(rank_plus - alg.signature[0]))
    return report


def metric_from_involution(
    alg: QuadraticLieAlgebra,
    tau: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> GeneralizedMetric:
    """
    Validate an involution and wrap it as a GeneralizedMetric.

    Raises:
        MetricValidationError: Listing every violated condition with its residual
    """
    report = check_metric(alg, tau, tolerances)
    if not report.passed:
        logger.warning("rejected involution: %s", report.failures)
        raise MetricValidationError.from_report(report)
    return GeneralizedMetric(np.asarray(tau, dtype=float))


def canonical_metric(alg: QuadraticLieAlgebra) -> GeneralizedMetric:
    """
    The involution Q sign(L) Q^T from eta = Q L Q^T.

    For diagonal pairings this is diag(sign(eta)); for su2_double it is the
    subalgebra splitting V+ = gbar_0, V- = g_0.
    """
    evals, q = np.linalg.eigh(alg.pairing)
    tau = q @ np.diag(np.sign(evals)) @ q.T
    return GeneralizedMetric(tau)


def pairing_orthogonal(alg: QuadraticLieAlgebra, antisym: np.ndarray) -> np.ndarray:
    """exp(eta^{-1} S) for antisymmetric S; preserves the pairing."""
    return scipy.linalg.expm(alg.inverse_pairing @ antisym)


def transform_metric(metric: GeneralizedMetric, g: np.ndarray) -> GeneralizedMetric:
    """g tau g^{-1}."""
    return GeneralizedMetric(g @ metric.tau @ np.linalg.inv(g))


def rotated_metric(alg: QuadraticLieAlgebra, i: int, j: int, theta: float) -> GeneralizedMetric:
    """
    Canonical metric conjugated by the one-parameter pairing-orthogonal group in the (e_i, e_j) plane.

    For a plane with one positive and one negative direction this is a hyperbolic rotation.
    On su2_double a boost of e_i into e_{i+3} leaves T_D = 0, so use random_metric
    for a generic starting point.
    """
    s = np.zeros((alg.dim, alg.dim))
    s[i, j] = theta
    s[j, i] = -theta
    return transform_metric(canonical_metric(alg), pairing_orthogonal(alg, s))


def random_pairing_orthogonal(
    alg: QuadraticLieAlgebra, seed: int, scale: float = 0.5
) -> np.ndarray:
    """Deterministic random element exp(eta^{-1} S), S antisymmetric Gaussian."""
    rng = np.random.default_rng(seed)
    a = rng.normal(scale=scale, size=(alg.dim, alg.dim))
    return pairing_orthogonal(alg, a - a.T)


def random_metric(alg: QuadraticLieAlgebra, seed: int, scale: float = 0.5) -> GeneralizedMetric:
    """
    Sample a generalized metric deterministically from a seed.

    Args:
        alg: Algebra with signature (p, q)
        seed: Seed for numpy's default generator
        scale: Standard deviation of the generator entries

    Returns:
        g tau_0 g^{-1} for the canonical tau_0 and a random pairing-orthogonal g
    """
    return transform_metric(canonical_metric(alg), random_pairing_orthogonal(alg, seed, scale))


def split_inverse(alg: QuadraticLieAlgebra, metric: GeneralizedMetric) -> SplitInversePairing:
    """
    Split t = eta^{-1} into t+ (range V+) and t- (range V-).

    t+ = Pi+ eta^{-1}, which restricted to V+ inverts eta|V+; t- is built as
    t - t+ so the two parts add back to t.
    """
    t = alg.inverse_pairing
    tplus = metric.pplus @ t
    tplus = (tplus + tplus.T) / 2
    tminus = t - tplus
    return SplitInversePairing(t=t, tplus=tplus, tminus=tminus)


def parse_metric_spec(alg: QuadraticLieAlgebra, spec: str) -> GeneralizedMetric:
    """
    Parse a CLI metric specifier.

    Accepted forms: "canonical", "subalgebra", "random:seed=S", "rotated:i,j,theta",
    "file:PATH" (JSON with a "tau" matrix).

    Raises:
        MetricValidationError: On unknown specifiers or invalid involutions
    """
    kind, _, rest = spec.partition(":")
    if kind in ("canonical", "subalgebra"):
        return canonical_metric(alg)
    if kind == "random":
        params = dict(item.split("=", 1) for item in rest.split(",") if item)
        return random_metric(alg, int(params.get("seed", 0)), float(params.get("scale", 0.5)))
    if kind == "rotated":
        try:
            i, j, theta = rest.split(",")
            return rotated_metric(alg, int(i), int(j), float(theta))
        except ValueError:
            raise MetricValidationError(f"bad rotated specifier {spec!r}, expected rotated:i,j,theta")
    if kind == "file":
        try:
            tau = np.array(json.loads(Path(rest).read_text())["tau"], dtype=float)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
            raise MetricValidationError(f"cannot read metric {rest}: {e}")
        return metric_from_involution(alg, tau)
    raise MetricValidationError(f"unknown metric specifier {spec!r}")


def _render(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, float):
        return format(value, ".17g")
    return json.dumps(value)


def structure_document(alg: QuadraticLieAlgebra, metric: Optional[GeneralizedMetric] = None) -> str:
    """
    JSON text of an algebra and, when given, a metric on it.

    Keys are dim, name, pairing, structure and tau, arrays row-major with every
    float printed to 17 significant digits. The same file serves both
    "--preset file:PATH" and "--metric file:PATH".
    """
    document = alg.to_dict()
    if metric is not None:
        if metric.dim != alg.dim:
            raise MetricValidationError(f"metric of size {metric.dim} on an algebra of dim {alg.dim}")
        document["tau"] = metric.tau.tolist()
    return "{\n" + ",\n".join(f"  {json.dumps(k)}: {_render(v)}" for k, v in document.items()) + "\n}\n"


def load_structure_document(
    text: str,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[QuadraticLieAlgebra, Optional[GeneralizedMetric]]:
    """
    Parse structure_document output.

    Returns:
        (algebra, metric), metric None when the document has no tau

    Raises:
        AlgebraValidationError: On unreadable JSON or a missing pairing or structure
        MetricValidationError: If tau is not a generalized metric
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraValidationError(f"cannot read structure document: {e}")
    alg = QuadraticLieAlgebra.from_dict(data)
    if "tau" not in data:
        return alg, None
    return alg, metric_from_involution(alg, np.array(data["tau"], dtype=float), tolerances)
