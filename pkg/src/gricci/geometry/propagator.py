# -*- encoding: utf-8 -*-
"""
gricci Propagator Forms - P0, its conjugate and P1 on pairs of points.

P0 is the pullback of (1 / 2 pi i) dz1 dz2 / (z1 - z2)^2 along the endpoint map
r. The form is Mobius invariant, so it is evaluated in whichever of three
stereographic charts keeps both endpoints away from the chart pole; half-space
input is first carried to the ball by the inversion, which turns vertical
geodesics into ordinary ones.

P1 is r1^* of the area form of S^2 over 4 pi, where r1 is the unit tangent at
q1 of the geodesic through q1 and q2, pointing away from q2.

Forms on Conf_2 are returned as (..., 6, 6) antisymmetric component arrays in
the coordinates (q1, q2); eval_* functions contract them with two tangent
vectors.

Usage:
    from gricci.geometry import eval_p0, eval_p1

    value = eval_p0(cfg, v1, v2)
"""

import math

import numpy as np

from gricci.exceptions import GeometryError
from gricci.geometry.hyperbolic import (
    ConfigPoint,
    Model,
    ball_endpoint_components,
    halfspace_coordinate_components,
    invert,
)
from gricci.geometry.jet import Jet, dot, seed_points, sqrt, where

_EPS3 = np.zeros((3, 3, 3))
_EPS3[0, 1, 2] = _EPS3[1, 2, 0] = _EPS3[2, 0, 1] = 1.0
_EPS3[0, 2, 1] = _EPS3[2, 1, 0] = _EPS3[1, 0, 2] = -1.0


def _coordinate_seeds(cfg: ConfigPoint) -> tuple[tuple, tuple]:
    """Coordinate Jets of q1 and q2 seeded with the six unit directions."""
    shape = cfg.batch_shape
    eye = np.eye(6).reshape((6,) + (1,) * len(shape) + (6,))
    directions = np.broadcast_to(eye, (6,) + shape + (6,))
    return seed_points(cfg.q1, directions[..., :3]), seed_points(cfg.q2, directions[..., 3:])


def _charts(w: tuple) -> list[tuple[Jet, np.ndarray]]:
    """
    Orientation-preserving stereographic charts of S^2 with their denominators.

    zeta_S projects from the south pole, zeta_N = 1 / zeta_S from the north pole
    and zeta_E = zeta_S after a rotation taking (-1, 0, 0) to the south pole.
    """
    x, y, h = w
    return [
        ((x + 1j * y) / (1.0 + h), 1.0 + h.value),
        ((x - 1j * y) / (1.0 - h), 1.0 - h.value),
        ((-1.0 * h + 1j * y) / (1.0 + x), 1.0 + x.value),
    ]


def _chart_pair(w1: tuple, w2: tuple) -> tuple[Jet, Jet]:
    """Endpoints in the chart whose pole is farthest from both of them."""
    charts1, charts2 = _charts(w1), _charts(w2)
    scores = np.stack([np.minimum(d1, d2) for (_, d1), (_, d2) in zip(charts1, charts2)])
    best = np.argmax(scores, axis=0)
    z1, z2 = charts1[2][0], charts2[2][0]
    for k in (1, 0):
        z1 = where(best == k, charts1[k][0], z1)
        z2 = where(best == k, charts2[k][0], z2)
    return z1, z2


def _wedge(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """(..., k, k) components of dF1 ^ dF2 from (k, ...) gradients."""
    outer = np.einsum("i...,j...->...ij", g1, g2)
    return outer - np.swapaxes(outer, -1, -2)


def _contract(components: np.ndarray, v1, v2) -> np.ndarray:
    v1 = np.asarray(v1)
    v2 = np.asarray(v2)
    return np.einsum("...i,...ij,...j->...", v1, components, v2)


def p0_components(cfg: ConfigPoint) -> np.ndarray:
    """
    Components of P0 on Conf_2 in the coordinates of cfg's model.

    Returns:
        Complex (..., 6, 6) antisymmetric array P with P0(v, w) = v^T P w
    """
    q1, q2 = _coordinate_seeds(cfg)
    if cfg.model is Model.HALFSPACE:
        q1, q2 = invert(q1), invert(q2)
    w1, w2 = ball_endpoint_components(q1, q2)
    z1, z2 = _chart_pair(w1, w2)
    scale = 1.0 / ((z1.value - z2.value) ** 2 * (2j * math.pi))
    return _wedge(z1.grad, z2.grad) * scale[..., None, None]


def eval_p0(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """
    P0 evaluated on two tangent vectors of Conf_2.

    Args:
        cfg: Configuration in either model
        v1: (..., 6) tangent vector (dq1, dq2)
        v2: (..., 6) tangent vector

    Returns:
        Complex value(s)
    """
    return _contract(p0_components(cfg), v1, v2)


def eval_p0bar(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    return np.conj(eval_p0(cfg, v1, v2))


def _tangent_away(q1: tuple, q2: tuple) -> tuple:
    """Unit tangent at q1 of the geodesic through q1 and q2, pointing away from q2."""
    x1, y1, h1 = q1
    x2, y2, h2 = q2
    dx, dy = x2 - x1, y2 - y1
    lift = (dx * dx + dy * dy + h2 * h2 - h1 * h1) / 2.0
    toward = (h1 * dx, h1 * dy, lift)
    norm = sqrt(dot(toward, toward))
    return tuple(-1.0 * c / norm for c in toward)


def p1_components(cfg: ConfigPoint) -> np.ndarray:
    """
    Components of P1 = r1^* omega_S2 / 4 pi on half-space pairs.

    Raises:
        GeometryError: For ball configurations
    """
    if cfg.model is not Model.HALFSPACE:
        raise GeometryError("P1 is defined on half-space configurations")
    q1, q2 = _coordinate_seeds(cfg)
    r1 = _tangent_away(q1, q2)
    value = np.stack([c.value for c in r1], axis=-1)
    grad = np.stack([c.grad for c in r1], axis=-1)
    return np.einsum("abc,...a,i...b,j...c->...ij", _EPS3, value, grad, grad) / (4 * math.pi)


def eval_p1(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """P1 evaluated on two tangent vectors of Conf_2 (half space only)."""
    return _contract(p1_components(cfg), v1, v2)


def _chart_jets(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> tuple:
    if cfg.model is not Model.HALFSPACE:
        raise GeometryError("geodesic chart forms need the half-space model")
    directions = np.stack(np.broadcast_arrays(np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)))
    directions = np.broadcast_to(directions, (2,) + cfg.batch_shape + (6,))
    q1 = seed_points(cfg.q1, directions[..., :3])
    q2 = seed_points(cfg.q2, directions[..., 3:])
    return halfspace_coordinate_components(q1, q2)


def eval_p0_coordinates(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """P0 from its chart expression p0_chart(u) dz ^ du."""
    z, u, _, _ = _chart_jets(cfg, v1, v2)
    return p0_chart(u.value) * (z.grad[0] * u.grad[1] - z.grad[1] * u.grad[0])


def eval_p1_coordinates(cfg: ConfigPoint, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """P1 from its chart expression p1_chart() d(arg u) ^ dt1."""
    _, u, t1, _ = _chart_jets(cfg, v1, v2)
    arg = np.imag(u.grad / u.value)
    return p1_chart() * (arg[0] * t1.grad[1] - arg[1] * t1.grad[0])


def p0_chart(u: np.ndarray) -> np.ndarray:
    """Coefficient of dz ^ du in P0."""
    return 1.0 / (2j * math.pi * np.asarray(u) ** 2)


def p1_chart() -> float:
    """Coefficient of d(arg u) ^ dt1 in P1."""
    return 1.0 / (2 * math.pi)
