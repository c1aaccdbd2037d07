# -*- encoding: utf-8 -*-
"""
gricci Exterior Forms - sparse exterior algebra over batches of samples.

A form is a map from increasing index tuples to coefficient arrays that share
one batch shape. Wedge products merge index tuples with the sign of the
shuffle; terms that can no longer reach top degree are pruned.

Usage:
    from gricci.verify.exterior import ExteriorForm

    p = ExteriorForm.from_tensor(components, degree=2, dim=6)
    top = p.wedge(a).wedge(b).wedge(q).top()
"""

from collections.abc import Iterable
from typing import Optional, Sequence

import numpy as np

from gricci.exceptions import FormError


def _merge(left: tuple[int, ...], right: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted union of two disjoint index tuples."""
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


class ExteriorForm:
    """
    Homogeneous differential form with batched coefficients.

    Attributes:
        dim: Dimension of the underlying space
        degree: Form degree
        terms: Map of increasing index tuples to coefficient arrays
    """

    def __init__(self, dim: int, degree: int, terms: dict[tuple[int, ...], np.ndarray]):
        self.dim = dim
        self.degree = degree
        self.terms = terms

    @classmethod
    def scalar(cls, value, dim: int) -> "ExteriorForm":
        return cls(dim, 0, {(): np.asarray(value)})

    @classmethod
    def from_tensor(
        cls, tensor: np.ndarray, degree: int, dim: int, indices: Optional[Sequence[int]] = None
    ) -> "ExteriorForm":
        """
        Build a form of degree 0, 1 or 2 from its component tensor.

        Args:
            tensor: (...,), (..., k) or antisymmetric (..., k, k) components
            degree: Form degree
            dim: Dimension of the ambient space
            indices: Ambient index of each local coordinate (default 0..k-1)
        """
        tensor = np.asarray(tensor)
        if degree == 0:
            return cls.scalar(tensor, dim)
        if degree not in (1, 2):
            raise FormError(f"component tensors are supported up to degree 2, got {degree}")
        k = tensor.shape[-1]
        indices = list(range(k)) if indices is None else list(indices)
        if len(indices) != k or max(indices) >= dim:
            raise FormError(f"index map {indices} does not fit {k} local coordinates in dimension {dim}")
        terms: dict[tuple[int, ...], np.ndarray] = {}
        if degree == 1:
            for a in range(k):
                terms[(indices[a],)] = tensor[..., a]
            return cls(dim, 1, terms)
        for a in range(k):
            for b in range(a + 1, k):
                i, j = indices[a], indices[b]
                value = tensor[..., a, b] if i < j else -tensor[..., a, b]
                key = (min(i, j), max(i, j))
                terms[key] = terms[key] + value if key in terms else value
        return cls(dim, 2, terms)

    def support(self) -> frozenset[int]:
        return frozenset(i for key in self.terms for i in key)

    def wedge(self, other: "ExteriorForm", reachable: Optional[Iterable[int]] = None) -> "ExteriorForm":
        """
        Wedge product self ^ other.

        Args:
            other: Right factor
            reachable: Indices the factors still to come can supply; products
                whose missing indices are not all reachable are dropped

        Returns:
            ExteriorForm
        """
        if other.dim != self.dim:
            raise FormError(f"cannot wedge forms on dimensions {self.dim} and {other.dim}")
        allowed = None if reachable is None else frozenset(reachable)
        full = frozenset(range(self.dim))
        terms: dict[tuple[int, ...], np.ndarray] = {}
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                if set(left) & set(right):
                    continue
                sign, key = _merge(left, right)
                if allowed is not None and not (full - set(key)) <= allowed:
                    continue
                value = a * b if sign > 0 else -(a * b)
                terms[key] = terms[key] + value if key in terms else value
        return ExteriorForm(self.dim, self.degree + other.degree, terms)

    def prune(self, reachable: Iterable[int]) -> "ExteriorForm":
        allowed = frozenset(reachable)
        full = frozenset(range(self.dim))
        return ExteriorForm(
            self.dim, self.degree, {k: v for k, v in self.terms.items() if (full - set(k)) <= allowed}
        )

    def top(self) -> np.ndarray:
        """Coefficient of dx_0 ^ ... ^ dx_{dim-1}, zero if absent."""
        key = tuple(range(self.dim))
        if key in self.terms:
            return self.terms[key]
        shapes = [np.shape(v) for v in self.terms.values()]
        return np.zeros(np.broadcast_shapes(*shapes) if shapes else ())

    def __len__(self) -> int:
        return len(self.terms)


def wedge_all(factors: Sequence[ExteriorForm]) -> ExteriorForm:
    """
    Top-degree product of a sequence of factors, wedged left to right.

    Each partial product keeps only the terms whose missing indices lie in
    the support of the factors still to come, so the result holds at most
    the top-degree term.
    """
    if not factors:
        raise FormError("nothing to wedge")
    supports = [f.support() for f in factors]
    result = factors[0]
    for k in range(1, len(factors)):
        result = result.prune(frozenset().union(*supports[k:])).wedge(
            factors[k], reachable=frozenset().union(*supports[k + 1:])
        )
    return result
