# -*- encoding: utf-8 -*-
"""
gricci Geodesic Coordinates - the (z, u, t1, t2) chart on pairs of half-space points.

For a pair (q1, q2) with geodesic endpoints (z, z + u), the vertical
projections of q1 and q2 are z + t1 u and z + t2 u with 0 < t1 < t2 < 1, and
the heights are |u| sqrt(t (1 - t)). Pairs on a common vertical line have no
such chart and get VerticalCoords instead.

Usage:
    from gricci.geometry import to_halfspace_coords, from_halfspace_coords

    coords = to_halfspace_coords(cfg)
    cfg_again = from_halfspace_coords(coords)
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from gricci.exceptions import GeometryError
from gricci.geometry.hyperbolic import (
    ConfigPoint,
    Model,
    halfspace_coordinate_components,
    is_vertical,
)


@dataclass(frozen=True, eq=False)
class HalfspaceCoords:
    """
    Geodesic chart of one pair or a batch of pairs.

    Attributes:
        z: First boundary endpoint (complex)
        u: Endpoint separation, z2 = z + u (complex, nonzero)
        t1: Geodesic parameter of q1
        t2: Geodesic parameter of q2, t1 < t2
    """
    z: np.ndarray
    u: np.ndarray
    t1: np.ndarray
    t2: np.ndarray

    def __post_init__(self):
        for name in ("z", "u"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex))
        for name in ("t1", "t2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not np.all(np.abs(self.u) > 0):
            raise GeometryError("u must be nonzero")
        if not np.all((0 < self.t1) & (self.t1 < self.t2) & (self.t2 < 1)):
            raise GeometryError("geodesic parameters must satisfy 0 < t1 < t2 < 1")

    def heights(self) -> tuple[np.ndarray, np.ndarray]:
        size = np.abs(self.u)
        return size * np.sqrt(self.t1 * (1 - self.t1)), size * np.sqrt(self.t2 * (1 - self.t2))

    def to_dict(self) -> dict:
        return {
            "z": [np.real(self.z).tolist(), np.imag(self.z).tolist()],
            "u": [np.real(self.u).tolist(), np.imag(self.u).tolist()],
            "t1": self.t1.tolist(),
            "t2": self.t2.tolist(),
        }


@dataclass(frozen=True)
class VerticalCoords:
    """
    Pair on the vertical geodesic above a boundary point.

    Attributes:
        foot: Boundary point below both points (the finite endpoint)
        h1: Height of q1
        h2: Height of q2
    """
    foot: complex
    h1: float
    h2: float

    def __post_init__(self):
        if not (self.h1 > 0 and self.h2 > 0) or self.h1 == self.h2:
            raise GeometryError(f"vertical pair needs distinct positive heights, got {self.h1}, {self.h2}")


def to_halfspace_coords(cfg: ConfigPoint) -> Union[HalfspaceCoords, VerticalCoords]:
    """
    Geodesic chart of a half-space configuration.

    Args:
        cfg: Half-space configuration (single or batch)

    Returns:
        HalfspaceCoords, or VerticalCoords for a single vertical pair

    Raises:
        GeometryError: For ball input or for batches containing vertical pairs
    """
    if cfg.model is not Model.HALFSPACE:
        raise GeometryError("geodesic coordinates need the half-space model")
    vertical = is_vertical(cfg)
    if np.any(vertical):
        if cfg.q1.ndim == 1:
            return VerticalCoords(
                complex(cfg.q1[0], cfg.q1[1]), float(cfg.q1[2]), float(cfg.q2[2])
            )
        raise GeometryError(f"{int(np.sum(vertical))} vertical pairs in batch have no geodesic chart")
    z, u, t1, t2 = halfspace_coordinate_components(
        tuple(cfg.q1[..., i] for i in range(3)), tuple(cfg.q2[..., i] for i in range(3))
    )
    return HalfspaceCoords(z, u, t1, t2)


def from_halfspace_coords(coords: Union[HalfspaceCoords, VerticalCoords]) -> ConfigPoint:
    """Rebuild the half-space configuration from its chart."""
    if isinstance(coords, VerticalCoords):
        foot = coords.foot
        return ConfigPoint(
            Model.HALFSPACE,
            [foot.real, foot.imag, coords.h1],
            [foot.real, foot.imag, coords.h2],
        )
    h1, h2 = coords.heights()
    feet = [coords.z + t * coords.u for t in (coords.t1, coords.t2)]
    points = [
        np.stack([np.real(f), np.imag(f), h], axis=-1) for f, h in zip(feet, (h1, h2))
    ]
    return ConfigPoint(Model.HALFSPACE, *points)
