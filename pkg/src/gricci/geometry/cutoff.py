# -*- encoding: utf-8 -*-
"""
gricci Cutoff - the scale function ell and the pair indicator Theta.

Theta(z1, z2) is 0 when the boundary points are closer than the average of
the two scales eps * ell(z1) and eps * ell(z2), and 1 otherwise. Distances are
spherical on S^2 for the ball and Euclidean on C for the half space. A pair
with an endpoint at infinity is never cut.

Usage:
    from gricci.geometry import CutoffSpec, cutoff_theta

    spec = CutoffSpec("1 + 0.5 * exp(-(x^2 + y^2))", epsilon=1e-3)
    theta = cutoff_theta(spec, z1, z2)
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from gricci.exceptions import CutoffError
from gricci.geometry.expr import Expr
from gricci.geometry.hyperbolic import BoundaryPoint, Model
from gricci.geometry.parser import parse_cutoff

logger = logging.getLogger(__name__)

# Positivity is checked on this grid; the plane grid covers the support of the test forms
PLANE_GRID = np.linspace(-10.0, 10.0, 81)
SPHERE_GRID_SIZE = 2000

_VARIABLES = {Model.BALL: frozenset("xyz"), Model.HALFSPACE: frozenset("xy")}


def fibonacci_sphere(count: int) -> np.ndarray:
    """Nearly uniform (count, 3) points on S^2."""
    k = np.arange(count) + 0.5
    h = 1.0 - 2.0 * k / count
    phi = np.pi * (1.0 + 5**0.5) * k
    r = np.sqrt(1.0 - h * h)
    return np.stack([r * np.cos(phi), r * np.sin(phi), h], axis=-1)


@dataclass(frozen=True)
class CutoffSpec:
    """
    Boundary scale function and overall scale.

    Attributes:
        expression: Cutoff expression in x, y (and z on the sphere)
        epsilon: Positive overall scale
        model: Boundary the expression lives on
        tree: Parsed expression
    """
    expression: str
    epsilon: float = 1.0
    model: Model = Model.HALFSPACE
    tree: Expr = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not self.epsilon > 0:
            raise CutoffError(f"epsilon must be positive, got {self.epsilon}")
        tree = parse_cutoff(self.expression)
        unknown = tree.variables() - _VARIABLES[self.model]
        if unknown:
            raise CutoffError(
                f"cutoff on the {self.model.value} boundary cannot use {', '.join(sorted(unknown))}"
            )
        object.__setattr__(self, "tree", tree)
        with np.errstate(all="ignore"):
            values = self.ell(self._grid())
        if not np.all(np.isfinite(values)) or not np.min(values) > 0:
            raise CutoffError(
                f"cutoff {self.expression!r} is not positive on the {self.model.value} boundary "
                f"(min {np.nanmin(values):.3e})"
            )

    @classmethod
    def constant(cls, value: float, epsilon: float = 1.0, model: Model = Model.HALFSPACE) -> "CutoffSpec":
        return cls(repr(float(value)), epsilon, model)

    def with_epsilon(self, epsilon: float) -> "CutoffSpec":
        return CutoffSpec(self.expression, epsilon, self.model)

    def _grid(self) -> np.ndarray:
        if self.model is Model.BALL:
            return fibonacci_sphere(SPHERE_GRID_SIZE)
        xs, ys = np.meshgrid(PLANE_GRID, PLANE_GRID)
        return (xs + 1j * ys).ravel()

    def ell(self, points: np.ndarray) -> np.ndarray:
        """
        Evaluate ell.

        Args:
            points: Ball: (..., 3) points of S^2. Halfspace: complex array.
        """
        points = np.asarray(points)
        if self.model is Model.BALL:
            env = {"x": points[..., 0], "y": points[..., 1], "z": points[..., 2]}
            shape = points.shape[:-1]
        else:
            env = {"x": np.real(points), "y": np.imag(points)}
            shape = points.shape
        return np.broadcast_to(self.tree.evaluate(env), shape)

    def scale(self, points: np.ndarray) -> np.ndarray:
        return self.epsilon * self.ell(points)

    def to_dict(self) -> dict:
        return {"expression": self.expression, "epsilon": self.epsilon, "model": self.model.value}


def boundary_distance(model: Model, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Spherical distance on S^2 or Euclidean distance on C."""
    if Model(model) is Model.BALL:
        chord = np.linalg.norm(np.asarray(a) - np.asarray(b), axis=-1)
        return 2.0 * np.arcsin(np.minimum(chord / 2.0, 1.0))
    return np.abs(np.asarray(a) - np.asarray(b))


def theta_values(spec: CutoffSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Vectorised Theta on finite boundary coordinates in the cutoff's model.

    Returns:
        Integer array of 0 (cut) and 1 (kept)
    """
    threshold = (spec.scale(a) + spec.scale(b)) / 2.0
    return (boundary_distance(spec.model, a, b) > threshold).astype(int)


def cutoff_theta(spec: CutoffSpec, z1: BoundaryPoint, z2: BoundaryPoint) -> np.ndarray:
    """
    The cutoff indicator of a pair of boundary points.

    Args:
        spec: Cutoff
        z1: First endpoint(s)
        z2: Second endpoint(s)

    Returns:
        0 if d(z1, z2) <= eps (ell(z1) + ell(z2)) / 2, else 1
    """
    if spec.model is Model.BALL:
        return theta_values(spec, z1.to_sphere(), z2.to_sphere())
    p1 = z1.to_model(Model.HALFSPACE)
    p2 = z2.to_model(Model.HALFSPACE)
    infinite = p1.is_infinite | p2.is_infinite
    safe = np.where(infinite[..., None], np.array([0.0, 1.0]), np.stack([p1.coords, p2.coords]))
    a = safe[0][..., 0] / safe[0][..., 1]
    b = safe[1][..., 0] / safe[1][..., 1]
    return np.where(infinite, 1, theta_values(spec, a, b))
