# -*- encoding: utf-8 -*-
"""
gricci Convergence Scan - cutoff dependence of closed propagator loops.

An n-vertex loop places one test form at each vertex and a propagator on
each edge (i, i+1 mod n). Its regularization drops every configuration whose
points all lie within eps of one boundary point, i.e. whose tube radius

    m(q) = min over c in C of max_i sqrt(|p_i - c|^2 + h_i^2)

is below eps. Between two grid values e_lo < e_hi the integral changes by
the integral over the shell e_lo <= m < e_hi, so

    eps dI/deps ~ shell / log(e_hi / e_lo)

at the geometric midpoint. For n >= 3 this decays like eps^(n-2); the eye
(n = 2) has a logarithmic divergence and a flat derivative.

Usage:
    from gricci.verify import TestForm, convergence_scan

    forms = [TestForm.bump(1, (0, 0, 0), 1.0, (1, 0, 0))] * 3
    result = convergence_scan(3, forms, epsilons=[0.2, 0.1, 0.05, 0.025], n=200_000, seed=1)
    result.slope, result.expected
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
import scipy.optimize

from gricci.exceptions import BudgetExceeded, FormError, GridTooShort
from gricci.geometry import ConfigPoint, Model, p0_components, p1_components
from gricci.verify.exterior import ExteriorForm, wedge_all
from gricci.verify.forms import TestForm
from gricci.verify.sampler import MCEstimate, McRunner

logger = logging.getLogger(__name__)

MIN_VERTICES = 2
MAX_VERTICES = 5


class PropagatorKind(str, Enum):
    """Propagator placed on a loop edge (i, j)."""
    P0 = "p0"
    P0BAR = "p0bar"
    P1 = "p1"
    P1OP = "p1op"  # P1 with the roles of q_i and q_j exchanged


def default_edges(n_vertices: int) -> tuple[PropagatorKind, ...]:
    """P0 and P0bar alternating, closed with P1 when the loop is odd."""
    edges = [PropagatorKind.P0 if k % 2 == 0 else PropagatorKind.P0BAR for k in range(n_vertices)]
    if n_vertices % 2:
        edges[-1] = PropagatorKind.P1
    return tuple(edges)


def tube_radius(points: np.ndarray) -> np.ndarray:
    """
    Radius of the smallest boundary-centred ball holding every point.

    The optimal centre makes one, two or three of the squared distances
    f_i(c) = |p_i - c|^2 + h_i^2 equal and maximal, so it is found among
    the minimizers of single f_i, of f_i on the bisector f_i = f_j and of
    the triple intersections.

    Args:
        points: (m, n, 3) configurations of n half-space points

    Returns:
        (m,) tube radii
    """
    points = np.asarray(points, dtype=float)
    p = points[..., :2]
    h2 = points[..., 2] ** 2
    norm2 = np.sum(p * p, axis=-1) + h2  # |p_i|^2 + h_i^2
    n = points.shape[-2]
    candidates = [p[..., i, :] for i in range(n)]

    for i, j in combinations(range(n), 2):
        a = 2 * (p[..., j, :] - p[..., i, :])
        b = norm2[..., j] - norm2[..., i]
        a2 = np.sum(a * a, axis=-1)
        ok = a2 > 0
        step = np.where(ok, (b - np.sum(a * p[..., i, :], axis=-1)) / np.where(ok, a2, 1.0), np.nan)
        candidates.append(p[..., i, :] + step[..., None] * a)

    for i, j, k in combinations(range(n), 3):
        a1 = 2 * (p[..., j, :] - p[..., i, :])
        a2 = 2 * (p[..., k, :] - p[..., i, :])
        b1 = norm2[..., j] - norm2[..., i]
        b2 = norm2[..., k] - norm2[..., i]
        det = a1[..., 0] * a2[..., 1] - a1[..., 1] * a2[..., 0]
        ok = np.abs(det) > 1e-300
        safe = np.where(ok, det, 1.0)
        cx = (b1 * a2[..., 1] - b2 * a1[..., 1]) / safe
        cy = (a1[..., 0] * b2 - a2[..., 0] * b1) / safe
        candidates.append(np.where(ok[..., None], np.stack([cx, cy], axis=-1), np.nan))

    centres = np.stack(candidates, axis=-2)  # (m, c, 2)
    offsets = centres[..., :, None, :] - p[..., None, :, :]
    worst = np.max(np.sum(offsets * offsets, axis=-1) + h2[..., None, :], axis=-1)
    return np.sqrt(np.min(np.where(np.isnan(worst), np.inf, worst), axis=-1))


@dataclass(frozen=True)
class ShellRegion:
    """
    Sampling region for one shell: the first point over a box below e_hi,
    the others in the cylinder of radius 2 e_hi and height e_hi above it.
    """
    box: tuple[float, float, float, float]
    e_hi: float
    n_vertices: int

    def draw(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, float]:
        """(size, n, 3) configurations and their constant density."""
        x0, x1, y0, y1 = self.box
        area = (x1 - x0) * (y1 - y0)
        first = np.stack(
            [
                x0 + (x1 - x0) * rng.random(size),
                y0 + (y1 - y0) * rng.random(size),
                self.e_hi * (1.0 - rng.random(size)),
            ],
            axis=-1,
        )
        rest = self.n_vertices - 1
        radius = 2 * self.e_hi * np.sqrt(rng.random((size, rest)))
        phase = 2 * math.pi * rng.random((size, rest))
        height = self.e_hi * (1.0 - rng.random((size, rest)))
        others = np.stack(
            [
                first[:, None, 0] + radius * np.cos(phase),
                first[:, None, 1] + radius * np.sin(phase),
                height,
            ],
            axis=-1,
        )
        cylinder = math.pi * (2 * self.e_hi) ** 2 * self.e_hi
        density = 1.0 / (area * self.e_hi * cylinder**rest)
        return np.concatenate([first[:, None, :], others], axis=1), density


def _block(i: int) -> list[int]:
    return [3 * i, 3 * i + 1, 3 * i + 2]


def edge_factor(kind: PropagatorKind, qi: np.ndarray, qj: np.ndarray, i: int, j: int, dim: int) -> ExteriorForm:
    """The propagator on edge (i, j) as a form on the full configuration."""
    if kind is PropagatorKind.P1OP:
        comps = p1_components(ConfigPoint(Model.HALFSPACE, qj, qi))
        return ExteriorForm.from_tensor(comps, 2, dim, _block(j) + _block(i))
    cfg = ConfigPoint(Model.HALFSPACE, qi, qj)
    if kind is PropagatorKind.P1:
        comps = p1_components(cfg)
    else:
        comps = p0_components(cfg)
        if kind is PropagatorKind.P0BAR:
            comps = np.conj(comps)
    return ExteriorForm.from_tensor(comps, 2, dim, _block(i) + _block(j))


def loop_integrand(
    forms: Sequence[TestForm], edges: Sequence[PropagatorKind], points: np.ndarray
) -> np.ndarray:
    """
    Top-degree coefficient of the loop integrand in the Cartesian
    coordinates (q_0, ..., q_{n-1}).

    Args:
        forms: One test form per vertex
        edges: Propagator on each edge (k, k+1 mod n)
        points: (m, n, 3) configurations

    Returns:
        (m,) complex coefficients
    """
    n = len(forms)
    dim = 3 * n
    factors = [
        ExteriorForm.from_tensor(form.tensor(points[:, k, :]), form.degree, dim, _block(k))
        for k, form in enumerate(forms)
    ]
    for k, kind in enumerate(edges):
        j = (k + 1) % n
        factors.append(edge_factor(PropagatorKind(kind), points[:, k, :], points[:, j, :], k, j, dim))
    return wedge_all(factors).top()


@dataclass(frozen=True)
class ConvergenceResult:
    """
    Scan of eps dI/deps over a cutoff grid.

    Attributes:
        n_vertices: Loop length
        edges: Propagator on each edge
        epsilons: Geometric midpoints of the shells, decreasing
        derivatives: |eps dI/deps| per shell
        stderrs: Standard errors of the derivatives
        slope: Fitted exponent of |eps dI/deps| against eps
        slope_stderr: Standard error of the slope
    """
    n_vertices: int
    edges: tuple[PropagatorKind, ...]
    epsilons: tuple[float, ...]
    derivatives: tuple[float, ...]
    stderrs: tuple[float, ...]
    slope: float
    slope_stderr: float

    @property
    def expected(self) -> int:
        return self.n_vertices - 2

    def within(self, tolerance: float) -> bool:
        return abs(self.slope - self.expected) <= tolerance

    def to_dict(self) -> dict:
        return {
            "n_vertices": self.n_vertices,
            "edges": [e.value for e in self.edges],
            "epsilons": list(self.epsilons),
            "derivatives": list(self.derivatives),
            "stderrs": list(self.stderrs),
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "expected": self.expected,
        }


def _shell_box(forms: Sequence[TestForm], e_hi: float) -> Optional[tuple[float, float, float, float]]:
    boxes = [f.footprint(e_hi) for f in forms]
    if any(b is None for b in boxes):
        return None
    pad = 2 * e_hi
    x0, x1 = max(b[0] for b in boxes) - pad, min(b[1] for b in boxes) + pad
    y0, y1 = max(b[2] for b in boxes) - pad, min(b[3] for b in boxes) + pad
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, x1, y0, y1


def shell_integral(
    forms: Sequence[TestForm],
    edges: Sequence[PropagatorKind],
    e_lo: float,
    e_hi: float,
    n: int,
    seed: int,
    stream: tuple[int, ...] = (),
    **options,
) -> MCEstimate:
    """Monte-Carlo integral of the loop over e_lo <= m(q) < e_hi."""
    box = _shell_box(forms, e_hi)
    if box is None:
        return MCEstimate.exact(0.0, seed)
    region = ShellRegion(box, e_hi, len(forms))

    def integrand(rng: np.random.Generator, size: int) -> np.ndarray:
        points, density = region.draw(rng, size)
        radius = tube_radius(points)
        keep = (radius >= e_lo) & (radius < e_hi)
        out = np.zeros(size, dtype=complex)
        if np.any(keep):
            out[keep] = loop_integrand(forms, edges, points[keep]) / density
        return out

    return McRunner(seed, n, stream=stream, **options).run(integrand)


def _line(x, slope, intercept):
    return slope * x + intercept


def convergence_scan(
    n_vertices: int,
    forms: Sequence[TestForm],
    epsilons: Sequence[float],
    n: int = 200_000,
    seed: int = 0,
    edges: Optional[Sequence[PropagatorKind]] = None,
    window: Optional[tuple[float, float]] = None,
    **options,
) -> ConvergenceResult:
    """
    Estimate eps dI/deps on a cutoff grid and fit its power law.

    Args:
        n_vertices: Loop length, 2 to 5
        forms: One test form per vertex; degrees sum to n_vertices
        epsilons: Cutoff grid, at least 4 distinct values
        n: Samples per shell
        seed: Root seed; shell k uses stream (k,)
        edges: Propagator per edge (default_edges when omitted)
        window: Optional (lo, hi) range of shell midpoints used in the fit
        **options: batch_size, threads, budget for the runner

    Returns:
        ConvergenceResult

    Raises:
        FormError: If the forms do not fit the loop
        GridTooShort: If fewer than 4 grid values, or fewer than 3 usable
            shells, remain
    """
    if not MIN_VERTICES <= n_vertices <= MAX_VERTICES:
        raise FormError(f"loops have {MIN_VERTICES} to {MAX_VERTICES} vertices, got {n_vertices}")
    forms = list(forms)
    if len(forms) != n_vertices:
        raise FormError(f"{n_vertices}-vertex loop needs {n_vertices} forms, got {len(forms)}")
    if sum(f.degree for f in forms) != n_vertices:
        raise FormError(f"form degrees must sum to {n_vertices}, got {[f.degree for f in forms]}")
    edges = tuple(PropagatorKind(e) for e in (edges or default_edges(n_vertices)))
    if len(edges) != n_vertices:
        raise FormError(f"{n_vertices}-vertex loop needs {n_vertices} edges, got {len(edges)}")

    grid = sorted({float(e) for e in epsilons if e > 0}, reverse=True)
    if len(grid) < 4:
        raise GridTooShort(len(grid))

    mids, values, errors = [], [], []
    for k, (e_hi, e_lo) in enumerate(zip(grid, grid[1:])):
        mid = math.sqrt(e_hi * e_lo)
        if window is not None and not window[0] <= mid <= window[1]:
            continue
        try:
            shell = shell_integral(forms, edges, e_lo, e_hi, n, seed, stream=(k,), **options)
        except BudgetExceeded as e:
            if e.estimate is None:
                raise
            shell = e.estimate
        span = math.log(e_hi / e_lo)
        mids.append(mid)
        values.append(abs(shell.value) / span)
        errors.append(shell.stderr / span)
        logger.info("shell [%g, %g): |eps dI/deps| = %.4e +- %.2e", e_lo, e_hi, values[-1], errors[-1])

    usable = [i for i, (v, s) in enumerate(zip(values, errors)) if v > 0 and s > 0]
    if len(usable) < 3:
        raise GridTooShort(len(usable), required=3)
    x = np.log([mids[i] for i in usable])
    y = np.log([values[i] for i in usable])
    sigma = np.array([errors[i] / values[i] for i in usable])
    params, cov = scipy.optimize.curve_fit(_line, x, y, p0=(float(n_vertices - 2), float(y[0])), sigma=sigma, absolute_sigma=True)
    result = ConvergenceResult(
        n_vertices,
        edges,
        tuple(mids),
        tuple(values),
        tuple(errors),
        float(params[0]),
        float(math.sqrt(cov[0, 0])),
    )
    logger.info("%d-vertex loop: slope %.3f +- %.3f (expected %d)", n_vertices, result.slope, result.slope_stderr, result.expected)
    return result
