# -*- encoding: utf-8 -*-
"""
gricci Quadratic Lie Algebras - structure constants with an invariant pairing.

Structure constants are stored fully lowered, c[a, b, c] = <[e_a, e_b], e_c>,
so total antisymmetry is a property of the stored array. Raising goes through
the inverse pairing explicitly.

Usage:
    from gricci.algebra import preset_algebra, validate_algebra

    alg = preset_algebra("su2_double")
    report = validate_algebra(alg)
    assert report.passed
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.linalg

from gricci.config import DEFAULT_TOLERANCES, Tolerances
from gricci.exceptions import AlgebraValidationError, SingularPairingError, ValidationReport

logger = logging.getLogger(__name__)


class Preset(str, Enum):
    """Named algebras available from preset_algebra."""
    ABELIAN = "abelian"
    SU2 = "su2"
    SU2_DOUBLE = "su2_double"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class QuadraticLieAlgebra:
    """
    A Lie algebra with a non-degenerate invariant symmetric pairing.

    Attributes:
        pairing: n x n symmetric matrix eta[a, b] = <e_a, e_b>
        structure: n x n x n array c[a, b, c] = <[e_a, e_b], e_c>
        name: Label used in manifests and reports
    """
    pairing: np.ndarray
    structure: np.ndarray
    name: str = "custom"
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pairing = np.array(self.pairing, dtype=float)
        structure = np.array(self.structure, dtype=float)
        n = pairing.shape[0]
        if pairing.shape != (n, n) or n < 1:
            raise AlgebraValidationError(f"pairing must be a square matrix, got shape {pairing.shape}")
        if structure.shape != (n, n, n):
            raise AlgebraValidationError(
                f"structure must have shape {(n, n, n)}, got {structure.shape}"
            )
        pairing.setflags(write=False)
        structure.setflags(write=False)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "structure", structure)
        cond = float(np.linalg.cond(pairing))
        if not np.isfinite(cond) or cond > DEFAULT_TOLERANCES.singular_cond:
            raise SingularPairingError("pairing", cond)
        inverse = np.linalg.inv(pairing)
        inverse = (inverse + inverse.T) / 2
        inverse.setflags(write=False)
        object.__setattr__(self, "_inverse", inverse)

    @property
    def dim(self) -> int:
        return self.pairing.shape[0]

    @property
    def inverse_pairing(self) -> np.ndarray:
        """t = eta^{-1}, symmetrized."""
        return self._inverse

    @property
    def signature(self) -> tuple[int, int]:
        """Numbers of positive and negative eigenvalues of the pairing."""
        eig = np.linalg.eigvalsh(self.pairing)
        return int(np.sum(eig > 0)), int(np.sum(eig < 0))

    def bracket_constants(self) -> np.ndarray:
        """f[a, b, d] with [e_a, e_b] = f[a, b, d] e_d."""
        return np.einsum("abe,ed->abd", self.structure, self._inverse)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abd->d", x, y, self.bracket_constants())

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad_x acting on column vectors."""
        return np.einsum("a,abd->db", x, self.bracket_constants())

    def scaled(self, level: float) -> "QuadraticLieAlgebra":
        """Same bracket, pairing multiplied by level."""
        return QuadraticLieAlgebra(
            level * self.pairing, level * self.structure, name=self.name
        )

    def to_dict(self) -> dict:
        """Algebra part of the structure document; structure_document adds tau."""
        return {
            "dim": self.dim,
            "name": self.name,
            "pairing": self.pairing.tolist(),
            "structure": self.structure.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuadraticLieAlgebra":
        if "pairing" not in data or "structure" not in data:
            raise AlgebraValidationError("algebra document needs pairing and structure")
        pairing = np.array(data["pairing"], dtype=float)
        if "dim" in data and int(data["dim"]) != pairing.shape[0]:
            raise AlgebraValidationError(
                f"declared dim {data['dim']} does not match pairing of size {pairing.shape[0]}"
            )
        return cls(pairing, np.array(data["structure"], dtype=float), name=data.get("name", "custom"))


def jacobi_tensor(alg: QuadraticLieAlgebra) -> np.ndarray:
    """
    Lowered Jacobiator J[a, b, c, d] = <[[e_a, e_b], e_c] + cyclic, e_d>.
    """
    x = np.einsum("abe,ef,fcd->abcd", alg.structure, alg.inverse_pairing, alg.structure)
    return x + np.einsum("bcad->abcd", x) + np.einsum("cabd->abcd", x)


def validate_algebra(
    alg: QuadraticLieAlgebra,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ValidationReport:
    """
    Check the quadratic Lie algebra axioms.

    Args:
        alg: Algebra to check
        tolerances: Tolerances to compare residuals against

    Returns:
        ValidationReport with residuals for pairing symmetry, the two
        antisymmetries of c, and the Jacobi identity

    Raises:
        SingularPairingError: If the pairing condition number exceeds the limit
    """
    c = alg.structure
    report = ValidationReport(subject="algebra", tolerance=tolerances.algebra)
    report.condition_number = float(np.linalg.cond(alg.pairing))
    if report.condition_number > tolerances.singular_cond:
        raise SingularPairingError("pairing", report.condition_number)
    report.record("pairing_symmetry", np.max(np.abs(alg.pairing - alg.pairing.T)))
    report.record("antisymmetry_ab", np.max(np.abs(c + c.transpose(1, 0, 2))))
    report.record("antisymmetry_bc", np.max(np.abs(c + c.transpose(0, 2, 1))))
    report.record("jacobi", np.max(np.abs(jacobi_tensor(alg))))
    if not report.passed:
        logger.warning("algebra %s failed validation: %s", alg.name, report.failures)
    return report


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


def preset_algebra(
    name: str | Preset,
    p: int = 1,
    q: int = 1,
    level: float = 1.0,
    pairing: Optional[np.ndarray] = None,
    structure: Optional[np.ndarray] = None,
) -> QuadraticLieAlgebra:
    """
    Build a named quadratic Lie algebra.

    Presets:
        abelian     R^{p,q}: zero bracket, eta = diag(+1 x p, -1 x q)
        su2         c = epsilon, eta = -I (compact, negative definite)
        su2_double  gbar_0 + g_0 with g_0 = su2 and gbar_0 the same bracket with the
                    opposite pairing; gbar_0 comes first, so eta = diag(+I, -I)
        custom      explicit pairing and structure arrays

    Args:
        name: Preset name
        p: Positive directions (abelian only)
        q: Negative directions (abelian only)
        level: Scalar multiplier of the pairing (rescales c alike)
        pairing: Pairing matrix (custom only)
        structure: Structure constants (custom only)

    Returns:
        QuadraticLieAlgebra

    Raises:
        AlgebraValidationError: On unknown names or bad parameters
    """
    try:
        preset = Preset(name)
    except ValueError:
        raise AlgebraValidationError(f"unknown preset algebra {name!r}")

    if preset is Preset.ABELIAN:
        if p < 0 or q < 0 or p + q < 1:
            raise AlgebraValidationError(f"abelian preset needs p, q >= 0 and p + q >= 1, got {p}, {q}")
        n = p + q
        alg = QuadraticLieAlgebra(
            np.diag([1.0] * p + [-1.0] * q), np.zeros((n, n, n)), name=f"abelian:{p},{q}"
        )
    elif preset is Preset.SU2:
        alg = QuadraticLieAlgebra(-np.eye(3), _levi_civita(), name="su2")
    elif preset is Preset.SU2_DOUBLE:
        eps = _levi_civita()
        c = np.zeros((6, 6, 6))
        c[:3, :3, :3] = -eps
        c[3:, 3:, 3:] = eps
        alg = QuadraticLieAlgebra(scipy.linalg.block_diag(np.eye(3), -np.eye(3)), c, name="su2_double")
    else:
        if pairing is None or structure is None:
            raise AlgebraValidationError("custom preset needs pairing and structure")
        alg = QuadraticLieAlgebra(pairing, structure, name="custom")

    return alg if level == 1.0 else alg.scaled(level)


def parse_algebra_spec(spec: str, level: float = 1.0) -> QuadraticLieAlgebra:
    """
    Parse a CLI algebra specifier.

    Accepted forms: "abelian:p,q", "su2", "su2_double", "file:PATH" (JSON document).
    """
    if spec.startswith("file:"):
        try:
            data = json.loads(Path(spec[5:]).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise AlgebraValidationError(f"cannot read algebra {spec[5:]}: {e}")
        alg = QuadraticLieAlgebra.from_dict(data)
        return alg if level == 1.0 else alg.scaled(level)
    if spec.startswith("abelian"):
        _, _, rest = spec.partition(":")
        try:
            p, q = (int(v) for v in (rest or "1,1").split(","))
        except ValueError:
            raise AlgebraValidationError(f"bad abelian specifier {spec!r}, expected abelian:p,q")
        return preset_algebra(Preset.ABELIAN, p=p, q=q, level=level)
    return preset_algebra(spec, level=level)


def automorphism(alg: QuadraticLieAlgebra, x: np.ndarray) -> np.ndarray:
    """exp(ad_x): a pairing-orthogonal Lie algebra automorphism."""
    return scipy.linalg.expm(alg.ad(np.asarray(x, dtype=float)))


def transform_algebra(alg: QuadraticLieAlgebra, g: np.ndarray) -> QuadraticLieAlgebra:
    """
    Express the algebra in the basis e'_a = g^{-1} e_a, i.e. push the tensors forward by g.

    For an automorphism g the result equals alg up to roundoff; for a general
    invertible g it is the isomorphic algebra with transported tensors.
    """
    ginv = np.linalg.inv(g)
    pairing = ginv.T @ alg.pairing @ ginv
    structure = np.einsum("abc,ai,bj,ck->ijk", alg.structure, ginv, ginv, ginv)
    return QuadraticLieAlgebra((pairing + pairing.T) / 2, structure, name=alg.name)
