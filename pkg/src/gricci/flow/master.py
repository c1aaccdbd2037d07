# -*- encoding: utf-8 -*-
"""
gricci Master Equation - symbolic check of {C, C} = 0 for polynomial Courant data.

Functions on W + V[1] + W*[2] are stored as superfunctions: a map from a sorted
tuple of odd generator indices (a1 < a2 < ...) to a sympy expression in the even
coordinates x_i and p_i. The graded Poisson bracket is

    {F, G} = dF/dx^i dG/dp_i - dF/dp_i dG/dx^i + (F d<_a) t^{ab} (d>_b G)

with right and left derivatives in the odd generators A^a.

Usage:
    from gricci.flow import master_equation_residual

    residual = master_equation_residual(cdata, sample_points)
"""

import itertools
import logging

import numpy as np
import sympy

from gricci.flow.courant import CourantData

logger = logging.getLogger(__name__)

Superfunction = dict[tuple[int, ...], sympy.Expr]


def _normal_order(indices: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on a repeated index."""
    if len(set(indices)) != len(indices):
        return 0, ()
    sign = 1
    for i, j in itertools.combinations(range(len(indices)), 2):
        if indices[i] > indices[j]:
            sign = -sign
    return sign, tuple(sorted(indices))


def _add(target: Superfunction, key: tuple[int, ...], value: sympy.Expr) -> None:
    target[key] = target.get(key, sympy.Integer(0)) + value


def multiply(f: Superfunction, g: Superfunction) -> Superfunction:
    """Product of superfunctions with Grassmann signs."""
    out: Superfunction = {}
    for (i, fi), (j, gj) in itertools.product(f.items(), g.items()):
        sign, key = _normal_order(i + j)
        if sign:
            _add(out, key, sign * fi * gj)
    return out


def even_derivative(f: Superfunction, var: sympy.Symbol) -> Superfunction:
    return {k: sympy.diff(v, var) for k, v in f.items()}


def odd_derivative(f: Superfunction, a: int, right: bool) -> Superfunction:
    """Left or right derivative in the odd generator A^a."""
    out: Superfunction = {}
    for key, value in f.items():
        if a not in key:
            continue
        m = key.index(a)
        sign = (-1) ** (len(key) - 1 - m) if right else (-1) ** m
        _add(out, key[:m] + key[m + 1:], sign * value)
    return out


def poisson_bracket(
    f: Superfunction,
    g: Superfunction,
    t: np.ndarray,
    xs: tuple[sympy.Symbol, ...],
    ps: tuple[sympy.Symbol, ...],
) -> Superfunction:
    """The graded Poisson bracket of two superfunctions."""
    out: Superfunction = {}

    def accumulate(part: Superfunction, factor) -> None:
        for key, value in part.items():
            _add(out, key, factor * value)

    for x, p in zip(xs, ps):
        accumulate(multiply(even_derivative(f, x), even_derivative(g, p)), 1)
        accumulate(multiply(even_derivative(f, p), even_derivative(g, x)), -1)
    n = t.shape[0]
    right = [odd_derivative(f, a, right=True) for a in range(n)]
    left = [odd_derivative(g, b, right=False) for b in range(n)]
    for a, b in itertools.product(range(n), repeat=2):
        if t[a, b] != 0 and right[a] and left[b]:
            accumulate(multiply(right[a], left[b]), sympy.Float(t[a, b]))
    return out


def _polynomial(terms: dict, index, xs) -> sympy.Expr:
    expr = sympy.Integer(0)
    for exponent, coeff in terms.items():
        value = float(coeff[index])
        if value:
            expr += sympy.Float(value) * sympy.Mul(*(x**e for x, e in zip(xs, exponent)))
    return expr


def hamiltonian(cdata: CourantData) -> tuple[Superfunction, tuple, tuple]:
    """
    C = 1/6 c_abc(x) A^a A^b A^c + rho^i_a(x) p_i A^a as a superfunction.

    Returns:
        (C, x symbols, p symbols)
    """
    m, n = cdata.base_dim, cdata.fiber_dim
    xs = sympy.symbols(f"x0:{m}")
    ps = sympy.symbols(f"p0:{m}")
    c: Superfunction = {}
    for a, b, cc in itertools.combinations(range(n), 3):
        # the six orderings of a totally antisymmetric c collapse onto a<b<c
        expr = _polynomial(cdata.c_terms, (a, b, cc), xs)
        if expr != 0:
            c[(a, b, cc)] = expr
    for a in range(n):
        expr = sum(
            (_polynomial(cdata.rho_terms, (i, a), xs) * ps[i] for i in range(m)),
            sympy.Integer(0),
        )
        if expr != 0:
            c[(a,)] = expr
    return c, xs, ps


def poisson_square(cdata: CourantData) -> tuple[Superfunction, tuple, tuple]:
    """{C, C} expanded, with the x and p symbols."""
    c, xs, ps = hamiltonian(cdata)
    t = np.linalg.inv(cdata.pairing)
    square = poisson_bracket(c, c, (t + t.T) / 2, xs, ps)
    return {k: sympy.expand(v) for k, v in square.items()}, xs, ps


def master_equation_residual(cdata: CourantData, sample_points: np.ndarray) -> float:
    """
    Largest coefficient of {C, C} over the sample points.

    Every coefficient of a monomial in A and p is a polynomial in x; each is
    evaluated at every sample point.

    Args:
        cdata: Polynomial Courant data
        sample_points: k x base_dim array of points of W

    Returns:
        Max absolute residual (0.0 when {C, C} vanishes identically)
    """
    points = np.atleast_2d(np.asarray(sample_points, dtype=float))
    square, xs, ps = poisson_square(cdata)
    worst = 0.0
    for key, expr in square.items():
        if expr == 0:
            continue
        for coeff in sympy.Poly(expr, *ps).coeffs():
            fn = sympy.lambdify(xs, coeff, "numpy")
            values = np.broadcast_to(fn(*points.T), (points.shape[0],))
            worst = max(worst, float(np.max(np.abs(values))))
    logger.debug("master equation residual %.3e over %d points", worst, points.shape[0])
    return worst
