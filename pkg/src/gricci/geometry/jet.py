# -*- encoding: utf-8 -*-
"""
gricci Jets - first-order forward-mode dual numbers over numpy arrays.

A Jet carries a value array and its derivatives along k seed directions,
stored with the direction axis first: grad.shape == (k,) + value.shape.
Real and complex values are both supported, so boundary coordinates can be
built as x + 1j * y and pushed through Mobius charts.

Usage:
    from gricci.geometry.jet import Jet, sqrt

    x = Jet.variable(np.array([1.0, 2.0]), np.array([[1.0, 0.0]]))
    y = sqrt(x * x + 1.0)
    y.grad[0]  # dy/dx along the seed
"""

import functools
import operator
from dataclasses import dataclass
from typing import Union

import numpy as np

Number = Union[float, complex, np.ndarray]


@dataclass(frozen=True, eq=False)
class Jet:
    """
    Value with first derivatives along k seed directions.

    Attributes:
        value: Array of any shape
        grad: Array of shape (k,) + value.shape
    """
    value: np.ndarray
    grad: np.ndarray

    @classmethod
    def variable(cls, value: Number, directions: np.ndarray) -> "Jet":
        """Independent variable with derivative directions[i] along seed i."""
        value = np.asarray(value)
        directions = np.asarray(directions)
        return cls(value, np.broadcast_to(directions, directions.shape[:1] + value.shape).copy())

    @property
    def seeds(self) -> int:
        return self.grad.shape[0]

    def _grad(self, shape: tuple) -> np.ndarray:
        """Derivatives broadcast to (k,) + shape."""
        shape = tuple(shape)
        own = self.grad.shape[1:]
        grad = self.grad.reshape((self.seeds,) + (1,) * (len(shape) - len(own)) + own)
        return np.broadcast_to(grad, (self.seeds,) + shape)

    def _wrap(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        value = np.asarray(other)
        shape = np.broadcast_shapes(value.shape, np.shape(self.value))
        grad = np.zeros((self.seeds,) + shape, dtype=np.result_type(value, self.grad))
        return Jet(np.broadcast_to(value, shape), grad)

    def __add__(self, other):
        other = self._wrap(other)
        value = self.value + other.value
        return Jet(value, self._grad(np.shape(value)) + other._grad(np.shape(value)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, -self.grad)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            value = self.value * other
            return Jet(value, self._grad(np.shape(value)) * other)
        value = self.value * other.value
        return Jet(value, self._grad(np.shape(value)) * other.value + self.value * other._grad(np.shape(value)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            value = self.value / other
            return Jet(value, self._grad(np.shape(value)) / other)
        value = self.value / other.value
        return Jet(value, (self._grad(np.shape(value)) - value * other._grad(np.shape(value))) / other.value)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, exponent: float):
        return Jet(self.value**exponent, exponent * self.value ** (exponent - 1) * self.grad)

    def conj(self) -> "Jet":
        return Jet(np.conj(self.value), np.conj(self.grad))

    @property
    def real(self) -> "Jet":
        return Jet(np.real(self.value), np.real(self.grad))

    @property
    def imag(self) -> "Jet":
        return Jet(np.imag(self.value), np.imag(self.grad))


def sqrt(x):
    """Square root of a Jet or a plain array."""
    if isinstance(x, Jet):
        root = np.sqrt(x.value)
        return Jet(root, x.grad / (2 * root))
    return np.sqrt(x)


def value_of(x) -> np.ndarray:
    return x.value if isinstance(x, Jet) else np.asarray(x)


def where(condition: np.ndarray, a: Jet, b: Jet) -> Jet:
    """Elementwise selection between two Jets of the same shape."""
    return Jet(np.where(condition, a.value, b.value), np.where(condition, a.grad, b.grad))


def seed_points(points: np.ndarray, directions: np.ndarray) -> tuple[Jet, ...]:
    """
    Split (..., d) points into d coordinate Jets.

    Args:
        points: Array of shape (..., d)
        directions: Array of shape (k, ..., d) with the tangent seeds

    Returns:
        Tuple of d Jets, one per coordinate
    """
    points = np.asarray(points, dtype=float)
    directions = np.asarray(directions, dtype=float)
    return tuple(
        Jet(points[..., i], np.broadcast_to(directions[..., i], directions.shape[:1] + points.shape[:-1]).copy())
        for i in range(points.shape[-1])
    )


def dot(a: tuple, b: tuple):
    """Sum of componentwise products of Jets or arrays, without an int start value."""
    return functools.reduce(operator.add, (x * y for x, y in zip(a, b)))
