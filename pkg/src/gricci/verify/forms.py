# -*- encoding: utf-8 -*-
"""
gricci Test Forms - compactly supported differential forms on the half space.

A TestForm is a sum of bumps. Each bump is a polynomial of degree at most one
times the smooth profile exp(1 - 1/(1 - s^2)), s = |q - center| / radius, so
every component is closed-form, smooth and supported in the declared ball.

Components are indexed by increasing index tuples of the coordinates
(x, y, h): degree 1 uses dx, dy, dh and degree 2 uses dx^dy, dx^dh, dy^dh.

Usage:
    from gricci.verify import TestForm

    alpha = TestForm.bump(1, center=(0, 0, 0), radius=1.0, coefficients=(1, 0.5, 0))
    alpha.components(points)
"""

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from gricci.exceptions import FormError

BASIS = {degree: tuple(combinations(range(3), degree)) for degree in range(4)}


def bump_profile(points: np.ndarray, center: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """
    The smooth bump and its gradient.

    Returns:
        (phi, grad_phi) with shapes (...,) and (..., 3)
    """
    offset = np.asarray(points, dtype=float) - center
    s2 = np.sum(offset * offset, axis=-1) / radius**2
    inside = s2 < 1.0
    gap = np.where(inside, 1.0 - s2, 1.0)
    phi = np.where(inside, np.exp(1.0 - 1.0 / gap), 0.0)
    grad = (-2.0 * phi / (radius**2 * gap**2))[..., None] * offset
    return phi, grad


@dataclass(frozen=True, eq=False)
class Bump:
    """
    One polynomial-times-bump term.

    Attributes:
        center: (3,) center, may sit on or below the boundary plane
        radius: Support radius
        coefficients: (n_components,) constant parts
        gradient: (n_components, 3) linear parts, in q - center
    """
    center: np.ndarray
    radius: float
    coefficients: np.ndarray
    gradient: np.ndarray

    def boundary_radius(self) -> float:
        """Radius of the support disk on the plane h = 0 (0 if none)."""
        h = float(self.center[2])
        return math.sqrt(self.radius**2 - h * h) if abs(h) < self.radius else 0.0


@dataclass(frozen=True, eq=False)
class TestForm:
    """
    Compactly supported test form of degree 0, 1 or 2.

    Attributes:
        degree: Form degree
        bumps: Terms whose sum is the form
    """
    __test__ = False

    degree: int
    bumps: tuple[Bump, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise FormError(f"test forms have degree 0, 1 or 2, got {self.degree}")
        width = len(BASIS[self.degree])
        for bump in self.bumps:
            if bump.coefficients.shape != (width,) or bump.gradient.shape != (width, 3):
                raise FormError(
                    f"degree {self.degree} bump needs {width} coefficients, got {bump.coefficients.shape}"
                )
            if not bump.radius > 0:
                raise FormError(f"bump radius must be positive, got {bump.radius}")

    @classmethod
    def bump(
        cls,
        degree: int,
        center: Sequence[float],
        radius: float,
        coefficients: Sequence[float],
        gradient: Optional[Sequence[Sequence[float]]] = None,
    ) -> "TestForm":
        """
        Single bump form.

        Args:
            degree: 0, 1 or 2
            center: Center of the support ball
            radius: Support radius
            coefficients: One constant per basis component
            gradient: Optional linear part per component
        """
        coefficients = np.atleast_1d(np.asarray(coefficients, dtype=float))
        if gradient is None:
            gradient = np.zeros((coefficients.size, 3))
        return cls(
            degree,
            (Bump(np.asarray(center, dtype=float), float(radius), coefficients, np.asarray(gradient, dtype=float)),),
        )

    def __add__(self, other: "TestForm") -> "TestForm":
        if not isinstance(other, TestForm):
            return NotImplemented
        if other.degree != self.degree:
            raise FormError(f"cannot add forms of degree {self.degree} and {other.degree}")
        return TestForm(self.degree, self.bumps + other.bumps)

    def scaled(self, factor: float) -> "TestForm":
        return TestForm(
            self.degree,
            tuple(Bump(b.center, b.radius, factor * b.coefficients, factor * b.gradient) for b in self.bumps),
        )

    def components(self, points: np.ndarray) -> np.ndarray:
        """(..., n_components) values at (..., 3) points."""
        points = np.asarray(points, dtype=float)
        total = np.zeros(points.shape[:-1] + (len(BASIS[self.degree]),))
        for b in self.bumps:
            phi, _ = bump_profile(points, b.center, b.radius)
            poly = b.coefficients + (points - b.center) @ b.gradient.T
            total += poly * phi[..., None]
        return total

    def derivatives(self, points: np.ndarray) -> np.ndarray:
        """(..., n_components, 3) first derivatives of the components."""
        points = np.asarray(points, dtype=float)
        total = np.zeros(points.shape[:-1] + (len(BASIS[self.degree]), 3))
        for b in self.bumps:
            phi, grad = bump_profile(points, b.center, b.radius)
            poly = b.coefficients + (points - b.center) @ b.gradient.T
            total += phi[..., None, None] * b.gradient + poly[..., :, None] * grad[..., None, :]
        return total

    def tensor(self, points: np.ndarray) -> np.ndarray:
        """
        Components as a tensor: (...,) for degree 0, (..., 3) for degree 1 and
        the antisymmetric (..., 3, 3) array for degree 2.
        """
        comps = self.components(points)
        if self.degree == 0:
            return comps[..., 0]
        if self.degree == 1:
            return comps
        out = np.zeros(comps.shape[:-1] + (3, 3))
        for k, (i, j) in enumerate(BASIS[2]):
            out[..., i, j] = comps[..., k]
            out[..., j, i] = -comps[..., k]
        return out

    def boundary(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        Restriction to the plane h = 0.

        Returns:
            Degree 0: f. Degree 1: (..., 2) components of dx, dy. Degree 2:
            the dx^dy component.
        """
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        comps = self.components(np.stack([x, y, np.zeros_like(x)], axis=-1))
        if self.degree == 0:
            return comps[..., 0]
        if self.degree == 1:
            return comps[..., :2]
        return comps[..., 0]

    def boundary_box(self) -> Optional[tuple[float, float, float, float]]:
        """Bounding box (x0, x1, y0, y1) of the support on the plane, None if it misses the plane."""
        disks = [(b.center[0], b.center[1], b.boundary_radius()) for b in self.bumps]
        disks = [d for d in disks if d[2] > 0]
        if not disks:
            return None
        return (
            min(x - r for x, _, r in disks),
            max(x + r for x, _, r in disks),
            min(y - r for _, y, r in disks),
            max(y + r for _, y, r in disks),
        )

    def footprint(self, height: float) -> Optional[tuple[float, float, float, float]]:
        """Box (x0, x1, y0, y1) over which the support dips below the given height, None if it never does."""
        low = [b for b in self.bumps if b.center[2] - b.radius < height]
        if not low:
            return None
        return (
            min(b.center[0] - b.radius for b in low),
            max(b.center[0] + b.radius for b in low),
            min(b.center[1] - b.radius for b in low),
            max(b.center[1] + b.radius for b in low),
        )

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "bumps": [
                {
                    "center": b.center.tolist(),
                    "radius": b.radius,
                    "coefficients": b.coefficients.tolist(),
                    "gradient": b.gradient.tolist(),
                }
                for b in self.bumps
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestForm":
        try:
            return cls(
                int(data["degree"]),
                tuple(
                    Bump(
                        np.asarray(b["center"], dtype=float),
                        float(b["radius"]),
                        np.asarray(b["coefficients"], dtype=float),
                        np.asarray(b.get("gradient", np.zeros((len(b["coefficients"]), 3))), dtype=float),
                    )
                    for b in data["bumps"]
                ),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise FormError(f"malformed test form: {e}")


def horizontal_bump(center: Sequence[float] = (0.0, 0.0, 0.0), radius: float = 1.0) -> TestForm:
    """The 1-form (1 + x) dx + (0.5 - y) dy under a bump; the default lemma test form."""
    return TestForm.bump(1, center, radius, (1.0, 0.5, 0.0), ((1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, 0.0)))


def area_bump(center: Sequence[float] = (0.0, 0.0, 0.0), radius: float = 1.0) -> TestForm:
    """The 2-form (1 + x) dx^dy under a bump; the default anchor-loop test form."""
    return TestForm.bump(2, center, radius, (1.0, 0.0, 0.0), ((1.0, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)))


def scalar_bump(center: Sequence[float] = (0.0, 0.0, 0.0), radius: float = 1.0) -> TestForm:
    return TestForm.bump(0, center, radius, (1.0,))
