# -*- encoding: utf-8 -*-
"""
gricci CLI Commands - one handler per subcommand.

Handlers take the effective RunConfig and return an Outcome; they never
print or write files, which is left to the dispatcher in gricci.cli.main.

Usage:
    from gricci.cli.commands import COMMANDS

    outcome = COMMANDS["ricci"](config)
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from gricci.algebra import (
    GeneralizedMetric,
    QuadraticLieAlgebra,
    check_metric,
    parse_algebra_spec,
    parse_metric_spec,
    structure_document,
    validate_algebra,
)
from gricci.config import RunConfig
from gricci.diagrams import automorphism_count, contract, load_graph, loop_weight
from gricci.exceptions import ConfigError, StepUnderflow, ValidationError
from gricci.flow import (
    CourantData,
    FlowDirection,
    FlowScheme,
    beta,
    courant_t_dprime,
    exact_courant_data,
    field_redefinition,
    generalized_ricci,
    integrate_flow,
    master_equation_residual,
    t_d,
    weyl_anomaly_coefficient,
)
from gricci.flow.beta import block_residual
from gricci.geometry import CutoffSpec
from gricci.verify import (
    MCEstimate,
    area_bump,
    convergence_scan,
    courant_lhs,
    courant_rhs,
    horizontal_bump,
    lemma_lhs,
    lemma_rhs,
    scalar_bump,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.025, 0.0125)


@dataclass
class Outcome:
    """
    Result of one subcommand.

    Attributes:
        result: JSON-ready result record
        trajectory: Optional (header, rows) for trajectory.csv
        document: Optional structure document for metric.json
        passed: False when the command found a validation failure (exit 1)
    """
    result: dict
    trajectory: Optional[tuple[list[str], list[list[float]]]] = None
    document: Optional[str] = None
    passed: bool = True
    error: Optional[Exception] = field(default=None, repr=False)


def load_algebra(cfg: RunConfig) -> QuadraticLieAlgebra:
    return parse_algebra_spec(cfg.algebra, cfg.level)


def load_metric(cfg: RunConfig, alg: QuadraticLieAlgebra) -> GeneralizedMetric:
    return parse_metric_spec(alg, cfg.metric)


def load_courant(cfg: RunConfig, alg: Optional[QuadraticLieAlgebra] = None) -> CourantData:
    """
    Resolve the Courant data specifier.

    Accepted forms: None (constant bracket of the algebra over a line),
    "lie:M" (the same over an M-dimensional base), "exact:M", "file:PATH".
    """
    kind, _, rest = (cfg.courant or "lie").partition(":")
    if kind in ("lie", "exact"):
        try:
            base_dim = int(rest or 1)
        except ValueError:
            raise ConfigError(f"bad base dimension in courant specifier {cfg.courant!r}", ["courant"])
        if kind == "lie":
            return CourantData.from_lie_algebra(alg or load_algebra(cfg), base_dim=base_dim)
        return exact_courant_data(base_dim)
    if kind == "file":
        return CourantData.from_file(rest)
    raise ConfigError(f"unknown courant specifier {cfg.courant!r}", ["courant"])


def _base_point(cfg: RunConfig, cdata: CourantData) -> np.ndarray:
    if not cfg.x:
        return np.zeros(cdata.base_dim)
    x = np.asarray(cfg.x, dtype=float)
    if x.shape != (cdata.base_dim,):
        raise ConfigError(f"x needs {cdata.base_dim} coordinates, got {x.size}", ["x"])
    return x


def _constant(expression: str) -> Optional[float]:
    try:
        return float(expression)
    except ValueError:
        return None


def _estimate_record(op: str, cfg: RunConfig, estimate: MCEstimate) -> dict:
    record = estimate.to_dict()
    record.pop("wall_time", None)
    record.update({"op": op, "params_hash": cfg.config_hash(), "epsilon": cfg.epsilon})
    return record


def _choice(kind, value: str, key: str):
    try:
        return kind(value)
    except ValueError:
        choices = ", ".join(member.value for member in kind)
        raise ConfigError(f"{key} must be one of {choices}, got {value!r}", [key])


def _mc_options(cfg: RunConfig) -> dict:
    return {"batch_size": cfg.batch_size, "threads": cfg.threads, "budget": cfg.budget}


def cmd_ricci(cfg: RunConfig) -> Outcome:
    """T_D and the generalized Ricci tensor."""
    alg = load_algebra(cfg)
    metric = load_metric(cfg, alg)
    tensor = t_d(alg, metric, cfg.tolerances)
    return Outcome({
        "algebra": alg.name,
        "t_d": tensor,
        "generalized_ricci": generalized_ricci(alg, metric, cfg.tolerances),
        "norm": float(np.linalg.norm(tensor)),
        "block_residual": block_residual(tensor, metric),
    })


def cmd_beta(cfg: RunConfig) -> Outcome:
    """Beta function, its field redefinition and, for constant cutoffs, the Weyl anomaly."""
    alg = load_algebra(cfg)
    metric = load_metric(cfg, alg)
    b = beta(alg, metric)
    result = {
        "algebra": alg.name,
        "beta": b,
        "pairing_antisymmetry": float(np.max(np.abs(alg.pairing @ b + b.T @ alg.pairing))),
        "field_redefinition_defect": field_redefinition(alg, metric, cfg.epsilon, cfg.hbar).orthogonality_defect,
    }
    ell1, ell2 = _constant(cfg.l1), _constant(cfg.l2)
    if ell1 is not None and ell2 is not None:
        result["weyl_anomaly"] = weyl_anomaly_coefficient(alg, metric, ell1, ell2, cfg.hbar)
    return Outcome(result)


def cmd_flow(cfg: RunConfig) -> Outcome:
    """Integrate the flow; the trajectory goes to trajectory.csv."""
    alg = load_algebra(cfg)
    metric = load_metric(cfg, alg)
    if len(cfg.s_span) != 2:
        raise ConfigError(f"s_span needs two values, got {cfg.s_span}", ["s_span"])
    s0, s1 = (float(v) for v in cfg.s_span)
    direction = _choice(FlowDirection, cfg.direction, "direction")
    if direction.sign * (s1 - s0) < 0:
        raise ConfigError(f"s_span {s0}:{s1} runs against direction {direction.value}", ["s_span", "direction"])
    header = ["s", "residual"] + [f"tau_{i}_{j}" for i in range(alg.dim) for j in range(alg.dim)]
    error = None
    try:
        trajectory = integrate_flow(
            alg, metric, (s0, s1), cfg.ds, cfg.hbar, cfg.tolerances, _choice(FlowScheme, cfg.scheme, "scheme"), cfg.ds_floor,
            direction=direction,
        )
    except StepUnderflow as e:
        trajectory = getattr(e, "trajectory", [])
        error = e
    result = {
        "algebra": alg.name,
        "steps": max(len(trajectory) - 1, 0),
        "s_final": trajectory[-1].s if trajectory else s0,
        "residual_final": trajectory[-1].residual if trajectory else None,
        "tau_final": trajectory[-1].metric.tau if trajectory else None,
    }
    document = structure_document(alg, trajectory[-1].metric) if trajectory else None
    return Outcome(result, (header, [state.to_row() for state in trajectory]), document, error=error)


def cmd_courant_ricci(cfg: RunConfig) -> Outcome:
    """T_D' of the Courant sigma model at a base point."""
    cdata = load_courant(cfg)
    x = _base_point(cfg, cdata)
    metric = parse_metric_spec(cdata.fiber_algebra(x), cfg.metric)
    tensor = courant_t_dprime(cdata, x, metric)
    return Outcome({
        "courant": cdata.name,
        "x": x,
        "t_dprime": tensor,
        "generalized_ricci": -tensor,
        "norm": float(np.linalg.norm(tensor)),
    })


def cmd_master_check(cfg: RunConfig) -> Outcome:
    """{C, C} at random base points."""
    cdata = load_courant(cfg)
    points = np.random.default_rng(cfg.seed).normal(size=(cfg.samples, cdata.base_dim))
    residual = master_equation_residual(cdata, points)
    passed = residual <= cfg.tolerances.algebra
    if not passed:
        logger.warning("master equation fails for %s: residual %.3e", cdata.name, residual)
    return Outcome(
        {"courant": cdata.name, "residual": residual, "samples": cfg.samples, "passed": passed}, passed=passed
    )


def _lemma_forms(pair: str):
    forms = {"0": scalar_bump, "1": horizontal_bump, "2": area_bump}
    degrees = pair.replace(" ", "")
    if degrees not in ("1,1", "0,2", "2,0"):
        raise ConfigError(f"pair must be one of 1,1 0,2 2,0, got {pair!r}", ["pair"])
    first, second = degrees.split(",")
    return forms[first](), forms[second]()


def cmd_verify_lemma(cfg: RunConfig) -> Outcome:
    """Monte-Carlo eye integral against its quadrature reference."""
    alpha, beta_form = _lemma_forms(cfg.pair)
    ell1, ell2 = CutoffSpec(cfg.l1), CutoffSpec(cfg.l2)
    estimate = lemma_lhs(alpha, beta_form, ell1, ell2, cfg.epsilon, cfg.n, cfg.seed, **_mc_options(cfg))
    reference = lemma_rhs(alpha, beta_form, ell1, ell2)
    record = _estimate_record("lemma_lhs", cfg, estimate)
    record.update({"reference": reference, "agree": estimate.agrees_with(reference), "l1": cfg.l1, "l2": cfg.l2})
    return Outcome(record)


def cmd_verify_courant(cfg: RunConfig) -> Outcome:
    """Monte-Carlo anchor-loop integral against its quadrature reference."""
    omega = area_bump()
    ell1, ell2 = CutoffSpec(cfg.l1), CutoffSpec(cfg.l2)
    estimate = courant_lhs(omega, ell1, ell2, cfg.epsilon, cfg.n, cfg.seed, **_mc_options(cfg))
    reference = courant_rhs(omega, ell1, ell2)
    record = _estimate_record("courant_lhs", cfg, estimate)
    record.update({"reference": reference, "agree": estimate.agrees_with(reference), "l1": cfg.l1, "l2": cfg.l2})
    return Outcome(record)


def cmd_scan_convergence(cfg: RunConfig) -> Outcome:
    """Slope of |eps dI/deps| for a loop of horizontal bumps."""
    forms = [horizontal_bump()] * cfg.vertices
    epsilons = cfg.epsilons or list(DEFAULT_EPSILONS)
    result = convergence_scan(cfg.vertices, forms, epsilons, cfg.n, cfg.seed, **_mc_options(cfg))
    record = result.to_dict()
    record.update({"op": "convergence_scan", "params_hash": cfg.config_hash()})
    return Outcome(record)


def cmd_diagram(cfg: RunConfig) -> Outcome:
    """Automorphisms and weight of a graph, and its tensor for pure Chern-Simons graphs."""
    graph = load_graph(cfg.graph)
    result = {
        "graph": graph.to_dict(),
        "automorphisms": automorphism_count(graph, cfg.fix_leaves),
        "weight": loop_weight(graph, cfg.fix_leaves),
    }
    if not graph.has_dotted_content:
        alg = load_algebra(cfg)
        result["tensor"] = contract(graph, alg, load_metric(cfg, alg))
    return Outcome(result)


def cmd_validate(cfg: RunConfig) -> Outcome:
    """Axiom residuals of the algebra and the metric."""
    alg = load_algebra(cfg)
    algebra_report = validate_algebra(alg, cfg.tolerances)
    try:
        metric = load_metric(cfg, alg)
    except ValidationError as e:
        return Outcome(
            {"algebra": algebra_report, "metric": e.to_dict(), "passed": False}, passed=False
        )
    metric_report = check_metric(alg, metric.tau, cfg.tolerances)
    passed = algebra_report.passed and metric_report.passed
    return Outcome({"algebra": algebra_report, "metric": metric_report, "passed": passed}, passed=passed)


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "ricci": cmd_ricci,
    "beta": cmd_beta,
    "flow": cmd_flow,
    "courant-ricci": cmd_courant_ricci,
    "master-check": cmd_master_check,
    "verify-lemma": cmd_verify_lemma,
    "verify-courant": cmd_verify_courant,
    "scan-convergence": cmd_scan_convergence,
    "diagram": cmd_diagram,
    "validate": cmd_validate,
}
