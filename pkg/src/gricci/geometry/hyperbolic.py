# -*- encoding: utf-8 -*-
"""
gricci Hyperbolic Geometry - configuration points, geodesic endpoints and isometries.

Two models of hyperbolic 3-space are supported:

    ball       Poincare ball |q| < 1, boundary S^2
    halfspace  upper half space h > 0, boundary C + {infinity}

They are identified by the inversion in the sphere of radius sqrt(2) centred at
(0, 0, -1). On the boundary this is the stereographic projection from the south
pole, so the ball point (x, y, z) of S^2 has the complex coordinate
(x + iy) / (1 + z) and the south pole is infinity.

Coordinate functions are written once for numpy arrays and Jets, so the same
code gives values and exact derivatives.

Usage:
    from gricci.geometry import ConfigPoint, Model, geodesic_endpoints

    cfg = ConfigPoint(Model.BALL, [0, 0, 0], [0, 0, 0.5])
    z1, z2 = geodesic_endpoints(cfg)
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from gricci.exceptions import GeometryError
from gricci.geometry.jet import Jet, dot, seed_points, sqrt, value_of, where

logger = logging.getLogger(__name__)


class Model(str, Enum):
    """Models of hyperbolic 3-space."""
    BALL = "ball"
    HALFSPACE = "halfspace"


def _conj(x):
    return x.conj() if isinstance(x, Jet) else np.conj(x)


def _real(x):
    return x.real if isinstance(x, Jet) else np.real(x)


def invert(q: tuple) -> tuple:
    """
    Inversion in the sphere of radius sqrt(2) about (0, 0, -1), on coordinate components.

    The map is its own inverse and exchanges the ball with the half space.
    """
    x, y, h = q
    shifted = h + 1.0
    norm = x * x + y * y + shifted * shifted
    return 2.0 * x / norm, 2.0 * y / norm, 2.0 * shifted / norm - 1.0


def ball_to_halfspace(points: np.ndarray) -> np.ndarray:
    """Map (..., 3) ball points to the half space."""
    points = np.asarray(points, dtype=float)
    return np.stack(invert(tuple(points[..., i] for i in range(3))), axis=-1)


def halfspace_to_ball(points: np.ndarray) -> np.ndarray:
    """Map (..., 3) half-space points to the ball."""
    return ball_to_halfspace(points)


def sphere_to_projective(w: np.ndarray) -> np.ndarray:
    """(..., 3) points of S^2 to normalized projective pairs, the south pole to (1, 0)."""
    w = np.asarray(w, dtype=float)
    num = w[..., 0] + 1j * w[..., 1]
    den = 1.0 + w[..., 2]
    south = den <= 1e-300
    z = np.where(south, 1.0, num / np.where(south, 1.0, den))
    return np.stack([z, np.where(south, 0.0, 1.0) + 0j], axis=-1)


def projective_to_sphere(pair: np.ndarray) -> np.ndarray:
    """Inverse stereographic projection of (..., 2) projective pairs."""
    pair = np.asarray(pair, dtype=complex)
    w0, w1 = pair[..., 0], pair[..., 1]
    cross = w0 * np.conj(w1)
    a0, a1 = np.abs(w0) ** 2, np.abs(w1) ** 2
    total = a0 + a1
    return np.stack([2 * cross.real / total, 2 * cross.imag / total, (a1 - a0) / total], axis=-1)


def normalize_projective(w0: np.ndarray, w1: np.ndarray) -> np.ndarray:
    """Projective pairs as (z, 1) for finite points and (1, 0) for infinity."""
    w0, w1 = np.broadcast_arrays(np.asarray(w0, dtype=complex), np.asarray(w1, dtype=complex))
    infinite = w1 == 0
    z = np.where(infinite, 1.0, w0 / np.where(infinite, 1.0, w1))
    return np.stack([z, np.where(infinite, 0.0, 1.0) + 0j], axis=-1)


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """
    Point (or array of points) of the boundary sphere.

    Attributes:
        model: Model whose boundary the coordinates describe
        coords: Ball: (..., 3) unit vectors. Halfspace: (..., 2) complex
            projective pairs, (z, 1) for z in C and (1, 0) for infinity.
    """
    model: Model
    coords: np.ndarray

    @classmethod
    def on_sphere(cls, w) -> "BoundaryPoint":
        return cls(Model.BALL, np.asarray(w, dtype=float))

    @classmethod
    def on_plane(cls, z) -> "BoundaryPoint":
        z = np.asarray(z, dtype=complex)
        return cls(Model.HALFSPACE, np.stack([z, np.ones_like(z)], axis=-1))

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(Model.HALFSPACE, np.array([1.0 + 0j, 0.0 + 0j]))

    @property
    def is_infinite(self) -> np.ndarray:
        if self.model is Model.BALL:
            return np.zeros(self.coords.shape[:-1], dtype=bool)
        return self.coords[..., 1] == 0

    def to_complex(self) -> np.ndarray:
        """Complex coordinate on C; GeometryError at infinity."""
        if self.model is Model.BALL:
            return sphere_to_projective(self.coords)[..., 0]
        if np.any(self.is_infinite):
            raise GeometryError("boundary point at infinity has no complex coordinate")
        return self.coords[..., 0] / self.coords[..., 1]

    def to_sphere(self) -> np.ndarray:
        if self.model is Model.BALL:
            return self.coords
        return projective_to_sphere(self.coords)

    def to_model(self, model: Model) -> "BoundaryPoint":
        model = Model(model)
        if model is self.model:
            return self
        if model is Model.BALL:
            return BoundaryPoint.on_sphere(self.to_sphere())
        return BoundaryPoint(Model.HALFSPACE, sphere_to_projective(self.coords))

    def to_dict(self) -> dict:
        if self.model is Model.BALL:
            return {"model": self.model.value, "point": self.coords.tolist()}
        if self.coords.ndim == 1 and self.is_infinite:
            return {"model": self.model.value, "point": "inf"}
        z = self.to_complex()
        return {"model": self.model.value, "point": [np.real(z).tolist(), np.imag(z).tolist()]}


@dataclass(frozen=True, eq=False)
class ConfigPoint:
    """
    A pair of distinct interior points, or a batch of such pairs.

    Attributes:
        model: Model the coordinates refer to
        q1: (..., 3) first points
        q2: (..., 3) second points, same shape as q1
    """
    model: Model
    q1: np.ndarray
    q2: np.ndarray

    def __post_init__(self):
        model = Model(self.model)
        q1 = np.asarray(self.q1, dtype=float)
        q2 = np.asarray(self.q2, dtype=float)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q2", q2)
        if q1.shape != q2.shape or q1.shape[-1:] != (3,):
            raise GeometryError(f"points must have matching shapes (..., 3), got {q1.shape} and {q2.shape}")
        for name, q in (("q1", q1), ("q2", q2)):
            if not np.all(np.isfinite(q)):
                raise GeometryError(f"{name} is not finite")
            if model is Model.BALL and not np.all(np.sum(q * q, axis=-1) < 1.0):
                raise GeometryError(f"{name} is not inside the unit ball")
            if model is Model.HALFSPACE and not np.all(q[..., 2] > 0):
                raise GeometryError(f"{name} is not above the boundary plane")
        if not np.all(np.linalg.norm(q1 - q2, axis=-1) > 0):
            raise GeometryError("configuration points coincide")

    @property
    def stacked(self) -> np.ndarray:
        """(..., 6) coordinates (q1, q2)."""
        return np.concatenate([self.q1, self.q2], axis=-1)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.q1.shape[:-1]

    @classmethod
    def from_stacked(cls, model: Model, points: np.ndarray) -> "ConfigPoint":
        points = np.asarray(points, dtype=float)
        return cls(model, points[..., :3], points[..., 3:])

    def flipped(self) -> "ConfigPoint":
        return ConfigPoint(self.model, self.q2, self.q1)

    def to_model(self, model: Model) -> "ConfigPoint":
        model = Model(model)
        if model is self.model:
            return self
        return ConfigPoint(model, ball_to_halfspace(self.q1), ball_to_halfspace(self.q2))

    def to_dict(self) -> dict:
        return {"model": self.model.value, "q1": self.q1.tolist(), "q2": self.q2.tolist()}


def ball_endpoint_components(q1: tuple, q2: tuple) -> tuple[tuple, tuple]:
    """
    Boundary endpoints of the geodesic through two ball points, on components.

    Works in the hyperboloid model: with X1, X2 the lifts and d the distance,
    the geodesic leaves X1 along V = (X2 - cosh(d) X1) / sinh(d), and its ends
    are the null directions X1 - V (q1 side) and X1 + V (q2 side).
    """
    n1 = dot(q1, q1)
    n2 = dot(q2, q2)
    diff = tuple(a - b for a, b in zip(q1, q2))
    gap = dot(diff, diff)
    x1 = ((1.0 + n1) / (1.0 - n1),) + tuple(2.0 * c / (1.0 - n1) for c in q1)
    x2 = ((1.0 + n2) / (1.0 - n2),) + tuple(2.0 * c / (1.0 - n2) for c in q2)
    cosh_minus_one = 2.0 * gap / ((1.0 - n1) * (1.0 - n2))
    cosh = 1.0 + cosh_minus_one
    sinh = sqrt(cosh_minus_one * (2.0 + cosh_minus_one))
    v = tuple((b - cosh * a) / sinh for a, b in zip(x1, x2))
    near = tuple(a - b for a, b in zip(x1, v))
    far = tuple(a + b for a, b in zip(x1, v))
    return (
        tuple(c / near[0] for c in near[1:]),
        tuple(c / far[0] for c in far[1:]),
    )


def _select(condition, a, b):
    if isinstance(a, Jet) or isinstance(b, Jet):
        return where(condition, a, b)
    return np.where(condition, a, b)


def halfspace_coordinate_components(q1: tuple, q2: tuple) -> tuple:
    """
    Geodesic chart (z, u, t1, t2) of a non-vertical half-space pair, on components.

    The geodesic is the semicircle from z to z + u; the feet of q1 and q2 are
    z + t1 u and z + t2 u. Distances from the feet to the endpoints are taken
    in the form that avoids cancellation on near-vertical geodesics.
    """
    x1, y1, h1 = q1
    x2, y2, h2 = q2
    dx, dy = x2 - x1, y2 - y1
    span2 = dx * dx + dy * dy
    span = sqrt(span2)
    # signed offsets of the feet from the centre of the semicircle
    f1 = (span2 + h2 * h2 - h1 * h1) / (2.0 * span)
    f2 = span - f1
    radius = sqrt(f1 * f1 + h1 * h1)
    f1v, f2v = value_of(f1), value_of(f2)
    m1 = _select(f1v >= 0, h1 * h1 / (radius + f1), radius - f1)
    m2 = _select(f2v >= 0, h2 * h2 / (radius + f2), radius - f2)
    length = span + m1 + m2
    direction = (dx + 1j * dy) / span
    z = x1 + 1j * y1 - m1 * direction
    return z, direction * length, m1 / length, (m1 + span) / length


def geodesic_endpoints(cfg: ConfigPoint) -> tuple[BoundaryPoint, BoundaryPoint]:
    """
    Endpoints of the geodesic through q1 and q2, z1 on the side of q1.

    Args:
        cfg: Configuration (single or batch)

    Returns:
        (z1, z2) as BoundaryPoints of cfg's model; vertical half-space geodesics
        end at the foot point and at infinity
    """
    if cfg.model is Model.BALL:
        q1 = tuple(cfg.q1[..., i] for i in range(3))
        q2 = tuple(cfg.q2[..., i] for i in range(3))
        w1, w2 = ball_endpoint_components(q1, q2)
        return BoundaryPoint.on_sphere(np.stack(w1, axis=-1)), BoundaryPoint.on_sphere(np.stack(w2, axis=-1))
    vertical = is_vertical(cfg)
    # vertical rows get a dummy partner so the semicircle formulas stay finite
    shifted = np.where(vertical[..., None], cfg.q2 + np.array([1.0, 0.0, 0.0]), cfg.q2)
    z, u, _, _ = halfspace_coordinate_components(
        tuple(cfg.q1[..., i] for i in range(3)), tuple(shifted[..., i] for i in range(3))
    )
    foot = cfg.q1[..., 0] + 1j * cfg.q1[..., 1]
    up = cfg.q2[..., 2] > cfg.q1[..., 2]
    finite = np.ones_like(foot)
    # the lower point of a vertical pair sees the foot, the upper one infinity
    p1 = normalize_projective(
        np.where(vertical, np.where(up, foot, 1.0), z),
        np.where(vertical, np.where(up, 1.0, 0.0), finite),
    )
    p2 = normalize_projective(
        np.where(vertical, np.where(up, 1.0, foot), z + u),
        np.where(vertical, np.where(up, 0.0, 1.0), finite),
    )
    return BoundaryPoint(Model.HALFSPACE, p1), BoundaryPoint(Model.HALFSPACE, p2)


def is_vertical(cfg: ConfigPoint) -> np.ndarray:
    """Half-space pairs on a common vertical line."""
    if cfg.model is not Model.HALFSPACE:
        raise GeometryError("vertical geodesics are a half-space notion")
    return (cfg.q1[..., 0] == cfg.q2[..., 0]) & (cfg.q1[..., 1] == cfg.q2[..., 1])


def orthogonality_residual(cfg: ConfigPoint) -> np.ndarray:
    """
    How far the circle through z1, q1, q2, z2 is from a geodesic.

    Ball: the circle through q1, q2 and z1 must pass through z2 and meet the
    unit sphere at right angles, i.e. its centre c satisfies |c|^2 = 1 + r^2.
    Returns the larger of the two defects per configuration.
    """
    ball = cfg.to_model(Model.BALL)
    z1, z2 = geodesic_endpoints(ball)
    a, b, c = z1.coords, ball.q1, ball.q2
    ab, ac = b - a, c - a
    normal = np.cross(ab, ac)
    nn = np.sum(normal * normal, axis=-1)[..., None]
    centre = a + (
        np.sum(ab * ab, axis=-1)[..., None] * np.cross(ac, normal)
        + np.sum(ac * ac, axis=-1)[..., None] * np.cross(normal, ab)
    ) / (2 * nn)
    r2 = np.sum((a - centre) ** 2, axis=-1)
    through = np.abs(np.sum((z2.coords - centre) ** 2, axis=-1) - r2)
    orthogonal = np.abs(np.sum(centre**2, axis=-1) - 1.0 - r2)
    coplanar = np.abs(np.sum(normal / np.sqrt(nn) * (z2.coords - a), axis=-1))
    return np.maximum(np.maximum(through, orthogonal), coplanar)


@dataclass(frozen=True)
class MobiusIsometry:
    """
    Orientation-preserving isometry of hyperbolic space from a PSL(2, C) matrix.

    Acts on the boundary by z -> (az + b) / (cz + d) and on the half space by the
    Poincare extension; the ball action is conjugated through the inversion.
    The matrix is normalized to determinant one.
    """
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = complex(self.a) * complex(self.d) - complex(self.b) * complex(self.c)
        if abs(det) < 1e-14:
            raise GeometryError(f"Mobius matrix is singular (det={det})")
        root = np.sqrt(det)
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)) / root)

    def inverse(self) -> "MobiusIsometry":
        return MobiusIsometry(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusIsometry") -> "MobiusIsometry":
        """self after other."""
        return MobiusIsometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def act_halfspace_components(self, q: tuple) -> tuple:
        """Poincare extension on (x, y, h) components."""
        x, y, h = q
        z = x + 1j * y
        num = self.a * z + self.b
        den = self.c * z + self.d
        h2 = h * h
        norm = _real(den * _conj(den)) + abs(self.c) ** 2 * h2
        moved = (num * _conj(den) + self.a * np.conj(self.c) * h2) / norm
        return _real(moved), _real(-1j * moved), h / norm

    def _act_components(self, q: tuple, model: Model) -> tuple:
        if model is Model.HALFSPACE:
            return self.act_halfspace_components(q)
        return invert(self.act_halfspace_components(invert(q)))

    def act(self, cfg: ConfigPoint) -> ConfigPoint:
        """Move both points of a configuration."""
        moved = []
        for q in (cfg.q1, cfg.q2):
            comps = self._act_components(tuple(q[..., i] for i in range(3)), cfg.model)
            moved.append(np.stack(comps, axis=-1))
        return ConfigPoint(cfg.model, *moved)

    def push_forward(self, cfg: ConfigPoint, vectors: np.ndarray) -> tuple[ConfigPoint, np.ndarray]:
        """
        Move a configuration together with tangent vectors.

        Args:
            cfg: Configuration
            vectors: (k, ..., 6) tangent vectors of Conf_2 at cfg

        Returns:
            (moved configuration, (k, ..., 6) pushed-forward vectors)
        """
        vectors = np.asarray(vectors, dtype=float)
        grads = []
        values = []
        for q, sl in ((cfg.q1, slice(0, 3)), (cfg.q2, slice(3, 6))):
            comps = self._act_components(seed_points(q, vectors[..., sl]), cfg.model)
            values.append(np.stack([c.value for c in comps], axis=-1))
            grads.append(np.stack([c.grad for c in comps], axis=-1))
        return ConfigPoint(cfg.model, *values), np.concatenate(grads, axis=-1)

    def act_boundary(self, point: BoundaryPoint) -> BoundaryPoint:
        pair = point.to_model(Model.HALFSPACE).coords
        w0, w1 = pair[..., 0], pair[..., 1]
        moved = BoundaryPoint(
            Model.HALFSPACE,
            normalize_projective(self.a * w0 + self.b * w1, self.c * w0 + self.d * w1),
        )
        return moved.to_model(point.model)


def random_isometry(seed: int, scale: float = 1.0) -> MobiusIsometry:
    """Deterministic random isometry with Gaussian complex matrix entries around the identity."""
    rng = np.random.default_rng(seed)
    m = np.eye(2) + scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / 2
    return MobiusIsometry(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def sample_configurations(
    model: Model, count: int, seed: int, radius: Optional[float] = None
) -> ConfigPoint:
    """
    Random configurations for tests and scans.

    Ball points are uniform in the ball of the given radius (default 0.9);
    half-space points have feet uniform in [-radius, radius]^2 (default 2)
    and log-uniform heights in [0.05, 5].
    """
    rng = np.random.default_rng(seed)
    model = Model(model)
    if model is Model.BALL:
        r = 0.9 if radius is None else radius
        raw = rng.normal(size=(2, count, 3))
        raw /= np.linalg.norm(raw, axis=-1, keepdims=True)
        raw *= r * rng.uniform(size=(2, count, 1)) ** (1 / 3)
    else:
        r = 2.0 if radius is None else radius
        raw = np.concatenate(
            [rng.uniform(-r, r, size=(2, count, 2)), np.exp(rng.uniform(np.log(0.05), np.log(5.0), size=(2, count, 1)))],
            axis=-1,
        )
    return ConfigPoint(model, raw[0], raw[1])
