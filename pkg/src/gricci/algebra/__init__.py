# -*- encoding: utf-8 -*-
"""
gricci Algebra - quadratic Lie algebras, generalized metrics and the split inverse pairing.

Usage:
    from gricci.algebra import preset_algebra, random_metric, split_inverse

    alg = preset_algebra("abelian", p=2, q=2)
    metric = random_metric(alg, seed=7)
    split = split_inverse(alg, metric)
"""

from gricci.algebra.lie import (
    Preset,
    QuadraticLieAlgebra,
    automorphism,
    jacobi_tensor,
    parse_algebra_spec,
    preset_algebra,
    transform_algebra,
    validate_algebra,
)
from gricci.algebra.metric import (
    GeneralizedMetric,
    SplitInversePairing,
    canonical_metric,
    check_metric,
    load_structure_document,
    metric_from_involution,
    pairing_orthogonal,
    parse_metric_spec,
    random_metric,
    random_pairing_orthogonal,
    rotated_metric,
    split_inverse,
    structure_document,
    transform_metric,
)

__all__ = [
    "Preset",
    "QuadraticLieAlgebra",
    "automorphism",
    "jacobi_tensor",
    "parse_algebra_spec",
    "preset_algebra",
    "transform_algebra",
    "validate_algebra",
    "GeneralizedMetric",
    "SplitInversePairing",
    "canonical_metric",
    "check_metric",
    "load_structure_document",
    "metric_from_involution",
    "pairing_orthogonal",
    "parse_metric_spec",
    "random_metric",
    "random_pairing_orthogonal",
    "rotated_metric",
    "split_inverse",
    "structure_document",
    "transform_metric",
]
