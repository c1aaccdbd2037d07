# -*- encoding: utf-8 -*-
"""
gricci Courant Data - polynomial Courant algebroid components on a trivial bundle.

The degree-3 Hamiltonian on W + V[1] + W*[2] is

    C(x, A, p) = 1/6 c_abc(x) A^a A^b A^c + rho^i_a(x) p_i A^a

with c and rho polynomial in x. Polynomials are stored as maps from exponent
tuples to coefficient arrays, which gives exact derivatives of any order.

Usage:
    from gricci.flow import CourantData

    cdata = CourantData.from_lie_algebra(alg, base_dim=1)
    cdata.c_derivative(x, order=1)
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gricci.algebra import QuadraticLieAlgebra
from gricci.exceptions import AlgebraValidationError

logger = logging.getLogger(__name__)

MAX_DEGREE = 4

Polynomial = dict[tuple[int, ...], np.ndarray]


def _monomial_derivative(exponent: tuple[int, ...], x: np.ndarray, js: tuple[int, ...]) -> float:
    """d/dx_{j1} ... d/dx_{jk} of prod x_i^e_i at x."""
    e = list(exponent)
    coeff = 1.0
    for j in js:
        if e[j] == 0:
            return 0.0
        coeff *= e[j]
        e[j] -= 1
    return coeff * float(np.prod([x[i] ** e[i] for i in range(len(e))]))


def _derivative(poly: Polynomial, shape: tuple[int, ...], x: np.ndarray, order: int) -> np.ndarray:
    """All order-th partial derivatives, derivative indices appended after the value shape."""
    m = len(x)
    out = np.zeros(shape + (m,) * order)
    for js in itertools.product(range(m), repeat=order):
        for exponent, coeff in poly.items():
            if sum(exponent) < order:
                continue
            factor = _monomial_derivative(exponent, x, js)
            if factor:
                out[(...,) + js] += factor * coeff
    return out


@dataclass(frozen=True, eq=False)
class CourantData:
    """
    Polynomial components of a Courant algebroid W x V -> W.

    Attributes:
        base_dim: Dimension m of the base W
        pairing: n x n inner product on the fiber V
        c_terms: Exponent tuple -> n x n x n totally antisymmetric coefficient
        rho_terms: Exponent tuple -> m x n coefficient of rho^i_a
        name: Label for manifests
    """
    base_dim: int
    pairing: np.ndarray
    c_terms: Polynomial = field(default_factory=dict)
    rho_terms: Polynomial = field(default_factory=dict)
    name: str = "courant"

    def __post_init__(self):
        pairing = np.array(self.pairing, dtype=float)
        object.__setattr__(self, "pairing", pairing)
        n, m = pairing.shape[0], self.base_dim
        if m < 1:
            raise AlgebraValidationError(f"base dimension must be positive, got {m}")
        c_terms = {}
        for exponent, coeff in self.c_terms.items():
            coeff = self._check_term(exponent, coeff, (n, n, n), "c")
            worst = max(
                np.max(np.abs(coeff + coeff.transpose(1, 0, 2))),
                np.max(np.abs(coeff + coeff.transpose(0, 2, 1))),
            )
            if worst > 1e-12:
                raise AlgebraValidationError(
                    f"c coefficient of x^{exponent} is not totally antisymmetric (residual {worst:.3e})"
                )
            c_terms[tuple(exponent)] = coeff
        rho_terms = {
            tuple(exponent): self._check_term(exponent, coeff, (m, n), "rho")
            for exponent, coeff in self.rho_terms.items()
        }
        object.__setattr__(self, "c_terms", c_terms)
        object.__setattr__(self, "rho_terms", rho_terms)

    def _check_term(self, exponent, coeff, shape, label) -> np.ndarray:
        coeff = np.array(coeff, dtype=float)
        if len(exponent) != self.base_dim or any(e < 0 for e in exponent):
            raise AlgebraValidationError(f"{label} exponent {exponent} does not fit base dimension {self.base_dim}")
        if sum(exponent) > MAX_DEGREE:
            raise AlgebraValidationError(f"{label} term x^{exponent} exceeds degree {MAX_DEGREE}")
        if coeff.shape != shape:
            raise AlgebraValidationError(f"{label} coefficient of x^{exponent} has shape {coeff.shape}, expected {shape}")
        if not np.all(np.isfinite(coeff)):
            raise AlgebraValidationError(f"{label} coefficient of x^{exponent} is not finite")
        return coeff

    @property
    def fiber_dim(self) -> int:
        return self.pairing.shape[0]

    def c_at(self, x: np.ndarray) -> np.ndarray:
        return self.c_derivative(x, 0)

    def rho_at(self, x: np.ndarray) -> np.ndarray:
        return self.rho_derivative(x, 0)

    def c_derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        """d_{j1..jk} c_abc(x), indexed [a, b, c, j1, ..., jk]."""
        n = self.fiber_dim
        return _derivative(self.c_terms, (n, n, n), np.asarray(x, dtype=float), order)

    def rho_derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        """d_{j1..jk} rho^i_a(x), indexed [i, a, j1, ..., jk]."""
        return _derivative(
            self.rho_terms, (self.base_dim, self.fiber_dim), np.asarray(x, dtype=float), order
        )

    def fiber_algebra(self, x: np.ndarray) -> QuadraticLieAlgebra:
        """The fiber pairing with the bracket coefficients frozen at x."""
        return QuadraticLieAlgebra(self.pairing, self.c_at(x), name=f"{self.name}@x")

    @property
    def degree(self) -> int:
        terms = list(self.c_terms) + list(self.rho_terms)
        return max((sum(e) for e in terms), default=0)

    @classmethod
    def from_lie_algebra(cls, alg: QuadraticLieAlgebra, base_dim: int = 1) -> "CourantData":
        """Constant c from a quadratic Lie algebra, rho = 0."""
        zero = (0,) * base_dim
        return cls(base_dim, alg.pairing, {zero: alg.structure}, {}, name=alg.name)

    def to_dict(self) -> dict:
        return {
            "base_dim": self.base_dim,
            "name": self.name,
            "pairing": self.pairing.tolist(),
            "c_terms": [{"exponent": list(e), "coefficient": c.tolist()} for e, c in self.c_terms.items()],
            "rho_terms": [{"exponent": list(e), "coefficient": r.tolist()} for e, r in self.rho_terms.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CourantData":
        try:
            return cls(
                base_dim=int(data["base_dim"]),
                pairing=np.array(data["pairing"], dtype=float),
                c_terms={tuple(t["exponent"]): np.array(t["coefficient"]) for t in data.get("c_terms", [])},
                rho_terms={tuple(t["exponent"]): np.array(t["coefficient"]) for t in data.get("rho_terms", [])},
                name=data.get("name", "courant"),
            )
        except (KeyError, TypeError) as e:
            raise AlgebraValidationError(f"malformed Courant document: {e}")

    @classmethod
    def from_file(cls, path: str | Path) -> "CourantData":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise AlgebraValidationError(f"cannot read Courant data {path}: {e}")
        return cls.from_dict(data)


def exact_courant_data(base_dim: int) -> CourantData:
    """
    The exact Courant algebroid TW + T*W with vanishing bracket coefficients.

    The fiber V = W + W* carries the split pairing <(v, a), (w, b)> = a(w) + b(v)
    and the anchor is the projection onto W.
    """
    m = base_dim
    zero = np.zeros((m, m))
    pairing = np.block([[zero, np.eye(m)], [np.eye(m), zero]])
    rho = np.hstack([np.eye(m), zero])
    return CourantData(m, pairing, {}, {(0,) * m: rho}, name=f"exact:{m}")

