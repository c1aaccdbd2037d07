# -*- encoding: utf-8 -*-
"""
gricci Divergence Integrals - the cutoff dependence of the two-vertex diagrams.

Monte-Carlo estimates of

    I = int r^*(Theta_{eps l1} - Theta_{eps l2}) P0 P0bar p1^*alpha p2^*beta
    J = int r^*(Theta_{eps l1} - Theta_{eps l2}) P0 P1 p2^*alpha

over pairs of half-space points, and quadrature references for their
eps -> 0 limits

    I -> -(1 / 2 pi) int log(l1 / l2) alpha ^ *beta
    J -> -(1 / 4 pi i) int log(l1 / l2) alpha

on the boundary plane.

Samples live in the geodesic chart (Re z, Im z, Re u, Im u, t1, t2), which
also orients the configuration space. The cutoff difference is supported on
a thin shell in |u|, so |u| is drawn log-uniformly between the smallest and
largest cutoff radius, arg u uniformly, and t1, t2 from the arcsine law,
which keeps the vertical parts of the test forms at bounded variance.
Forms are evaluated in Cartesian coordinates and pulled back along the
chart with forward-mode derivatives.

Usage:
    from gricci.geometry import CutoffSpec
    from gricci.verify import horizontal_bump, lemma_lhs, lemma_rhs

    alpha = horizontal_bump()
    l1, l2 = CutoffSpec("1"), CutoffSpec("2")
    estimate = lemma_lhs(alpha, alpha, l1, l2, epsilon=1e-3, n=200_000, seed=1)
    reference = lemma_rhs(alpha, alpha, l1, l2)
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.integrate
import scipy.stats

from gricci.exceptions import FormError, GeometryError
from gricci.geometry import ConfigPoint, CutoffSpec, Model, p0_components, p1_components, theta_values
from gricci.geometry.jet import seed_points, sqrt
from gricci.verify.exterior import ExteriorForm, wedge_all
from gricci.verify.forms import TestForm
from gricci.verify.sampler import MCEstimate, McRunner

logger = logging.getLogger(__name__)

# +1: the chart (Re z, Im z, Re u, Im u, t1, t2) is positively oriented
CHART_ORIENTATION = 1.0
CUTOFF_GRID = 41
_T_CLIP = 1e-12

Box = tuple[float, float, float, float]


def _intersect(boxes: Sequence[Optional[Box]], pad: float = 0.0) -> Optional[Box]:
    if any(b is None for b in boxes):
        return None
    x0 = max(b[0] for b in boxes) - pad
    x1 = min(b[1] for b in boxes) + pad
    y0 = max(b[2] for b in boxes) - pad
    y1 = min(b[3] for b in boxes) + pad
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, x1, y0, y1


def _cutoff_range(cutoffs: Sequence[CutoffSpec], box: Box) -> tuple[float, float]:
    xs = np.linspace(box[0], box[1], CUTOFF_GRID)
    ys = np.linspace(box[2], box[3], CUTOFF_GRID)
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    values = np.concatenate([np.ravel(c.ell(grid)) for c in cutoffs])
    return float(values.min()), float(values.max())


def _require_halfspace(*cutoffs: CutoffSpec) -> None:
    for c in cutoffs:
        if c.model is not Model.HALFSPACE:
            raise GeometryError("divergence integrals are sampled on the half space; use plane cutoffs")


@dataclass(frozen=True)
class ChartRegion:
    """
    Sampling region in the geodesic chart.

    Attributes:
        box: (x0, x1, y0, y1) range of z
        lo: Smallest |u|
        hi: Largest |u|
    """
    box: Box
    lo: float
    hi: float

    @property
    def area(self) -> float:
        return (self.box[1] - self.box[0]) * (self.box[3] - self.box[2])

    def draw(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Chart samples and their density.

        Returns:
            ((size, 6) chart coordinates, (size,) density)
        """
        w = rng.random((size, 6))
        x = self.box[0] + (self.box[1] - self.box[0]) * w[:, 0]
        y = self.box[2] + (self.box[3] - self.box[2]) * w[:, 1]
        span = math.log(self.hi / self.lo)
        r = self.lo * np.exp(span * w[:, 2])
        phase = 2 * math.pi * w[:, 3]
        ta = (1 - np.cos(math.pi * w[:, 4])) / 2
        tb = (1 - np.cos(math.pi * w[:, 5])) / 2
        t1 = np.clip(np.minimum(ta, tb), _T_CLIP, 1 - _T_CLIP)
        t2 = np.clip(np.maximum(ta, tb), _T_CLIP, 1 - _T_CLIP)
        density = (
            1.0 / self.area
            / (2 * math.pi * r * r * span)
            * 2.0 / (math.pi**2 * np.sqrt(t1 * (1 - t1) * t2 * (1 - t2)))
        )
        chart = np.stack([x, y, r * np.cos(phase), r * np.sin(phase), t1, t2], axis=-1)
        return chart, density


def chart_region(
    forms: Sequence[TestForm], cutoffs: Sequence[CutoffSpec], epsilon: float
) -> Optional[ChartRegion]:
    """
    Region holding every configuration where the integrand can be nonzero.

    Args:
        forms: Test forms that must all be nonzero at their points
        cutoffs: The two cutoffs
        epsilon: Overall cutoff scale

    Returns:
        ChartRegion, or None when the forms never come close enough to the
        boundary (or to each other)
    """
    rough = _intersect([f.footprint(math.inf) for f in forms])
    if rough is None:
        return None
    low, high = _cutoff_range(cutoffs, rough)
    lo, hi = epsilon * low / 2, 2 * epsilon * high
    box = _intersect([f.footprint(hi) for f in forms], pad=hi)
    if box is None:
        return None
    return ChartRegion(box, lo, hi)


def chart_points(chart: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Points of a chart sample with their derivatives along the chart.

    Args:
        chart: (m, 6) rows (Re z, Im z, Re u, Im u, t1, t2)

    Returns:
        (q1, J1, q2, J2) with points (m, 3) and Jacobians (m, 3, 6)
    """
    m = chart.shape[0]
    directions = np.broadcast_to(np.eye(6)[:, None, :], (6, m, 6))
    x, y, ux, uy, t1, t2 = seed_points(chart, directions)
    size = sqrt(ux * ux + uy * uy)
    out = []
    for t in (t1, t2):
        comps = (x + t * ux, y + t * uy, size * sqrt(t * (1.0 - t)))
        out.append(np.stack([c.value for c in comps], axis=-1))
        out.append(np.stack([c.grad.T for c in comps], axis=1))
    return tuple(out)


def pull_back(tensor: np.ndarray, degree: int, jac: np.ndarray) -> np.ndarray:
    """Pull a degree 0, 1 or 2 component tensor back along (m, k, d) Jacobians."""
    if degree == 0:
        return tensor
    if degree == 1:
        return np.einsum("ma,mai->mi", tensor, jac)
    return np.einsum("mab,mai,mbj->mij", tensor, jac, jac)


TopForm = Callable[[ConfigPoint, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _shell_integrand(region: ChartRegion, cut1: CutoffSpec, cut2: CutoffSpec, top_form: TopForm):
    def integrand(rng: np.random.Generator, size: int) -> np.ndarray:
        chart, density = region.draw(rng, size)
        z = chart[:, 0] + 1j * chart[:, 1]
        u = chart[:, 2] + 1j * chart[:, 3]
        delta = theta_values(cut1, z, z + u) - theta_values(cut2, z, z + u)
        keep = (delta != 0) & (chart[:, 5] > chart[:, 4])
        out = np.zeros(size, dtype=complex)
        if not np.any(keep):
            return out
        q1, j1, q2, j2 = chart_points(chart[keep])
        cfg = ConfigPoint(Model.HALFSPACE, q1, q2)
        jac = np.concatenate([j1, j2], axis=1)
        out[keep] = CHART_ORIENTATION * delta[keep] * top_form(cfg, jac, j1, j2) / density[keep]
        return out

    return integrand


def _form_factor(form: TestForm, points: np.ndarray, jac: np.ndarray) -> ExteriorForm:
    return ExteriorForm.from_tensor(pull_back(form.tensor(points), form.degree, jac), form.degree, 6)


def _run_shell(
    forms: Sequence[TestForm],
    ell1: CutoffSpec,
    ell2: CutoffSpec,
    epsilon: float,
    top_form: TopForm,
    n: int,
    seed: int,
    options: dict,
) -> MCEstimate:
    _require_halfspace(ell1, ell2)
    if not epsilon > 0:
        raise GeometryError(f"epsilon must be positive, got {epsilon}")
    if ell1.tree == ell2.tree:
        return MCEstimate.exact(0.0, seed)
    region = chart_region(forms, (ell1, ell2), epsilon)
    if region is None:
        logger.info("test forms miss the cutoff shell; integral is exactly zero")
        return MCEstimate.exact(0.0, seed)
    integrand = _shell_integrand(region, ell1.with_epsilon(epsilon), ell2.with_epsilon(epsilon), top_form)
    return McRunner(seed, n, **options).run(integrand)


def lemma_lhs(
    alpha: TestForm,
    beta: TestForm,
    ell1: CutoffSpec,
    ell2: CutoffSpec,
    epsilon: float = 1e-3,
    n: int = 1_000_000,
    seed: int = 0,
    **options,
) -> MCEstimate:
    """
    Monte-Carlo estimate of the cutoff-difference integral of the eye.

    Args:
        alpha: Form at q1
        beta: Form at q2; degrees (1, 1), (0, 2) or (2, 0)
        ell1: First cutoff scale function
        ell2: Second cutoff scale function
        epsilon: Overall cutoff scale
        n: Sample count
        seed: Root seed
        **options: batch_size, threads, budget for the runner

    Returns:
        Real MCEstimate; exactly zero when ell1 and ell2 coincide

    Raises:
        FormError: For other degree pairs
    """
    if (alpha.degree, beta.degree) not in ((1, 1), (0, 2), (2, 0)):
        raise FormError(f"the eye integrates forms of degrees (1, 1) or (0, 2), got {(alpha.degree, beta.degree)}")

    def top(cfg, jac, j1, j2):
        p0 = pull_back(p0_components(cfg), 2, jac)
        factors = [
            ExteriorForm.from_tensor(p0, 2, 6),
            ExteriorForm.from_tensor(np.conj(p0), 2, 6),
            _form_factor(alpha, cfg.q1, j1),
            _form_factor(beta, cfg.q2, j2),
        ]
        return np.real(wedge_all(factors).top())

    estimate = _run_shell((alpha, beta), ell1, ell2, epsilon, top, n, seed, options)
    logger.info("lemma estimate %s +- %.3e (n=%d)", estimate.value, estimate.stderr, estimate.n_samples)
    return estimate


def courant_lhs(
    alpha: TestForm,
    ell1: CutoffSpec,
    ell2: CutoffSpec,
    epsilon: float = 1e-3,
    n: int = 1_000_000,
    seed: int = 0,
    **options,
) -> MCEstimate:
    """
    Monte-Carlo estimate of the cutoff-difference integral of the anchor loop.

    Same sampler as lemma_lhs with P0 P0bar replaced by P0 P1 and a single
    2-form at q2. The estimate is complex; its limit is imaginary.
    """
    if alpha.degree != 2:
        raise FormError(f"the anchor loop integrates a 2-form, got degree {alpha.degree}")

    def top(cfg, jac, j1, j2):
        factors = [
            ExteriorForm.from_tensor(pull_back(p0_components(cfg), 2, jac), 2, 6),
            ExteriorForm.from_tensor(pull_back(p1_components(cfg), 2, jac), 2, 6),
            _form_factor(alpha, cfg.q2, j2),
        ]
        return wedge_all(factors).top()

    estimate = _run_shell((alpha,), ell1, ell2, epsilon, top, n, seed, options)
    logger.info("courant estimate %s +- %.3e (n=%d)", estimate.value, estimate.stderr, estimate.n_samples)
    return estimate


def _plane_integral(integrand: Callable[[float, float], float], box: Optional[Box]) -> float:
    if box is None:
        return 0.0
    value, _ = scipy.integrate.dblquad(
        lambda y, x: integrand(x, y), box[0], box[1], box[2], box[3], epsabs=1e-14, epsrel=1e-8
    )
    return value


def _log_ratio(ell1: Optional[CutoffSpec], ell2: Optional[CutoffSpec]) -> Callable[[float, float], float]:
    if ell1 is None or ell2 is None:
        return lambda x, y: 1.0
    _require_halfspace(ell1, ell2)
    return lambda x, y: math.log(float(ell1.ell(np.asarray(x + 1j * y))) / float(ell2.ell(np.asarray(x + 1j * y))))


def boundary_pairing(
    alpha: TestForm, beta: TestForm, ell1: Optional[CutoffSpec] = None, ell2: Optional[CutoffSpec] = None
) -> float:
    """
    int log(l1 / l2) alpha ^ *beta over the boundary plane for 1-forms.

    Without cutoffs the log factor is dropped. Forms of other degrees have no
    1-form part and pair to zero.
    """
    if alpha.degree != 1 or beta.degree != 1:
        return 0.0
    weight = _log_ratio(ell1, ell2)

    def integrand(x, y):
        a, b = alpha.boundary(x, y), beta.boundary(x, y)
        return weight(x, y) * (a[0] * b[0] + a[1] * b[1])

    return _plane_integral(integrand, _intersect([alpha.boundary_box(), beta.boundary_box()]))


def boundary_integral(alpha: TestForm, ell1: Optional[CutoffSpec] = None, ell2: Optional[CutoffSpec] = None) -> float:
    """int log(l1 / l2) alpha over the boundary plane for a 2-form."""
    if alpha.degree != 2:
        raise FormError(f"only 2-forms integrate over the plane, got degree {alpha.degree}")
    weight = _log_ratio(ell1, ell2)
    return _plane_integral(lambda x, y: weight(x, y) * float(alpha.boundary(x, y)), alpha.boundary_box())


def lemma_rhs(alpha: TestForm, beta: TestForm, ell1: CutoffSpec, ell2: CutoffSpec) -> float:
    """
    Quadrature reference -(1 / 2 pi) int log(l1 / l2) alpha ^ *beta.

    Only the 1-form parts enter; dh components and degree (0, 2) pairs give 0.
    """
    if ell1.tree == ell2.tree:
        return 0.0
    return -boundary_pairing(alpha, beta, ell1, ell2) / (2 * math.pi)


def courant_rhs(alpha: TestForm, ell1: CutoffSpec, ell2: CutoffSpec) -> complex:
    """Quadrature reference -(1 / 4 pi i) int log(l1 / l2) alpha."""
    if ell1.tree == ell2.tree:
        return 0j
    return -boundary_integral(alpha, ell1, ell2) / (4j * math.pi)


def prefactor_ratio(
    lemma: MCEstimate, courant: MCEstimate, lemma_weight: float, courant_weight: float
) -> tuple[float, float]:
    """
    Ratio of the fitted lemma and anchor-loop coefficients.

    Args:
        lemma: lemma_lhs estimate
        courant: courant_lhs estimate
        lemma_weight: int log(l1 / l2) alpha ^ *beta for the lemma run
        courant_weight: int log(l1 / l2) alpha for the anchor-loop run

    Returns:
        (|I / lemma_weight| / |J / courant_weight|, its standard error);
        2 in the limit
    """
    if lemma.value == 0 or courant.value == 0:
        raise FormError("prefactor ratio needs nonzero estimates")
    coef_i = abs(lemma.value / lemma_weight)
    coef_j = abs(courant.value / courant_weight)
    ratio = coef_i / coef_j
    rel = math.hypot(lemma.stderr / abs(lemma.value), courant.stderr / abs(courant.value))
    return ratio, ratio * rel


@dataclass(frozen=True)
class StabilityReport:
    """Lemma estimates at epsilon and epsilon / 10."""
    coarse: MCEstimate
    fine: MCEstimate
    sigmas: float = 3.0

    @property
    def difference(self) -> float:
        return abs(self.coarse.value - self.fine.value)

    @property
    def agree(self) -> bool:
        return self.coarse.agrees_with(self.fine.value, self.sigmas, self.fine.stderr)

    def to_dict(self) -> dict:
        return {
            "coarse": self.coarse.to_dict(),
            "fine": self.fine.to_dict(),
            "difference": self.difference,
            "agree": self.agree,
        }


def stability_check(
    alpha: TestForm,
    beta: TestForm,
    ell1: CutoffSpec,
    ell2: CutoffSpec,
    epsilon: float = 1e-3,
    n: int = 1_000_000,
    seed: int = 0,
    **options,
) -> StabilityReport:
    """Rerun lemma_lhs at epsilon / 10 and compare."""
    coarse = lemma_lhs(alpha, beta, ell1, ell2, epsilon, n, seed, **options)
    fine = lemma_lhs(alpha, beta, ell1, ell2, epsilon / 10, n, seed, **options)
    report = StabilityReport(coarse, fine)
    if not report.agree:
        logger.warning("lemma estimate moved by %.3e between eps=%g and eps=%g", report.difference, epsilon, epsilon / 10)
    return report


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log stderr against log n."""
    slope: float
    slope_stderr: float
    sizes: tuple[int, ...]
    stderrs: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "sizes": list(self.sizes),
            "stderrs": list(self.stderrs),
        }


def stderr_scaling(estimate: Callable[[int], MCEstimate], sizes: Sequence[int]) -> ScalingFit:
    """
    Fit the decay of the standard error with the sample count.

    Args:
        estimate: Runs an estimator with the given sample count
        sizes: At least three sample counts

    Returns:
        ScalingFit; the slope of an unbiased estimator is close to -1/2
    """
    if len(sizes) < 3:
        raise FormError(f"stderr scaling needs at least 3 sample counts, got {len(sizes)}")
    stderrs = [estimate(int(n)).stderr for n in sizes]
    fit = scipy.stats.linregress(np.log(sizes), np.log(stderrs))
    return ScalingFit(float(fit.slope), float(fit.stderr), tuple(int(n) for n in sizes), tuple(stderrs))
