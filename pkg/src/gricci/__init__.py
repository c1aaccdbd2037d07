"""
gricci - generalized Ricci flow of Chern-Simons boundary conditions.

Perturbative engine for Chern-Simons theory on hyperbolic 3-space with
generalized-metric boundary conditions: quadratic Lie algebras and
generalized metrics, signed Feynman graphs, the one-loop RG flow and its
Courant sigma model extension, hyperbolic propagators and Monte-Carlo checks
of the divergent boundary integrals.

Components:
- gricci.algebra: Quadratic Lie algebras, generalized metrics, split inverses
- gricci.diagrams: Signed graphs, automorphism counts, tensor contraction
- gricci.flow: T_D, beta function, RKMK flow integrator, Courant data
- gricci.geometry: Hyperbolic models, propagators P0 and P1, cutoffs
- gricci.verify: Monte-Carlo and quadrature checks of the divergences
- gricci.cli: Batch front-end

Usage:
    from gricci.algebra import preset_algebra, canonical_metric
    from gricci.flow import generalized_ricci

    alg = preset_algebra("su2_double")
    ricci = generalized_ricci(alg, canonical_metric(alg))
"""

from gricci.exceptions import (
    GricciError,
    NumericError,
    ValidationError,
    ValidationReport,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GricciError",
    "NumericError",
    "ValidationError",
    "ValidationReport",
]
