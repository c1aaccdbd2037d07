# -*- encoding: utf-8 -*-
"""
gricci Exceptions.

Custom exceptions for validation of algebraic data, diagram construction,
geometry and the numerical engines. Two families:

    ValidationError -> the input is wrong (CLI exit code 1)
    NumericError    -> the computation could not finish (CLI exit code 2)
"""

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class ValidationReport:
    """
    Per-check residuals of a validation run.

    Checks are reported as max-absolute residuals so that callers can see how
    far from the tolerance an input is, not only whether it passed.

    Attributes:
        subject: What was validated ("algebra", "metric", ...)
        residuals: Map of check name to max-absolute residual
        tolerance: Tolerance every residual is compared against
        failures: Names of the checks whose residual exceeded the tolerance
        condition_number: Condition number of the pairing, when relevant
    """
    subject: str
    residuals: dict[str, float] = field(default_factory=dict)
    tolerance: float = 1e-10
    failures: list[str] = field(default_factory=list)
    condition_number: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, check: str, residual: float) -> None:
        """Store a residual and flag it when it exceeds the tolerance."""
        self.residuals[check] = float(residual)
        if not residual <= self.tolerance:
            self.failures.append(check)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        d = {
            "subject": self.subject,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "residuals": dict(self.residuals),
            "failures": list(self.failures),
        }
        if self.condition_number is not None:
            d["condition_number"] = self.condition_number
        return d


class GricciError(Exception):
    """Base exception for all gricci errors."""

    def details(self) -> dict[str, Any]:
        return {}

    def to_dict(self) -> dict:
        """Convert exception to dictionary representation."""
        d = {"error": type(self).__name__, "message": str(self)}
        d.update(self.details())
        return d


class ValidationError(GricciError):
    """
    Raised when an input violates a structural invariant.

    Attributes:
        report: Optional ValidationReport with the residuals that failed
    """

    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        super().__init__(message)
        self.report = report

    @classmethod
    def from_report(cls, report: ValidationReport) -> "ValidationError":
        """
        Create the exception from a failed ValidationReport.

        Args:
            report: Report with at least one failure

        Returns:
            Exception ready to raise
        """
        worst = ", ".join(
            f"{name}={report.residuals[name]:.3e}" for name in report.failures
        )
        return cls(f"{report.subject} failed validation: {worst}", report=report)

    def details(self) -> dict[str, Any]:
        return {"report": self.report.to_dict()} if self.report else {}


class AlgebraValidationError(ValidationError):
    """Raised when structure constants or pairing violate the Lie algebra axioms."""
    pass


class MetricValidationError(ValidationError):
    """Raised when an involution is not a generalized metric."""
    pass


class SingularPairingError(ValidationError):
    """
    Raised when the pairing matrix is numerically singular.

    Attributes:
        matrix: Name of the offending matrix
        condition_number: Its 2-norm condition number
    """

    def __init__(self, matrix: str, condition_number: float):
        super().__init__(
            f"{matrix} matrix is numerically singular (condition number {condition_number:.3e})"
        )
        self.matrix = matrix
        self.condition_number = condition_number

    def details(self) -> dict[str, Any]:
        return {"matrix": self.matrix, "condition_number": self.condition_number}


class GraphValidationError(ValidationError):
    """
    Raised when a signed graph is malformed.

    Attributes:
        element: The half-edge, vertex or edge the problem was found at
    """

    def __init__(self, message: str, element: str = ""):
        super().__init__(message)
        self.element = element

    def details(self) -> dict[str, Any]:
        return {"element": self.element}


class DottedContentError(GraphValidationError):
    """Raised when a graph with dotted lines or anchor vertices reaches the Lie-algebra contraction."""
    pass


class DiagramSizeError(ValidationError):
    """Raised when a graph is larger than the automorphism search allows."""

    def __init__(self, half_edges: int, limit: int):
        super().__init__(f"graph has {half_edges} half-edges, search limit is {limit}")
        self.half_edges = half_edges
        self.limit = limit

    def details(self) -> dict[str, Any]:
        return {"half_edges": self.half_edges, "limit": self.limit}


class ConfigError(ValidationError):
    """
    Raised when a run configuration is rejected.

    Attributes:
        keys: Offending keys (unknown or missing)
    """

    def __init__(self, message: str, keys: Optional[list[str]] = None):
        super().__init__(message)
        self.keys = keys or []

    def details(self) -> dict[str, Any]:
        return {"keys": self.keys}


class CutoffError(ValidationError):
    """
    Raised when a cutoff expression cannot be parsed or is not positive.

    Attributes:
        line: Line of the parse error, if any
        column: Column of the parse error, if any
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def details(self) -> dict[str, Any]:
        return {"line": self.line, "column": self.column}


class GeometryError(ValidationError):
    """Raised for invalid configurations (coincident points, wrong model, boundary points)."""
    pass


class FormError(ValidationError):
    """Raised when a test form is malformed or used with the wrong degree."""
    pass


class NumericError(GricciError):
    """Raised when a computation cannot be completed numerically."""
    pass


class StepUnderflow(NumericError):
    """
    Raised when the flow integrator halves its step below the configured floor.

    Attributes:
        s: Log-scale parameter of the last accepted state
        ds: Step size that was rejected
        accepted: Number of accepted states before the failure
    """

    def __init__(self, s: float, ds: float, accepted: int):
        super().__init__(f"step size {ds:.3e} fell below the floor at s={s:.6g}")
        self.s = s
        self.ds = ds
        self.accepted = accepted
        self.trajectory: list = []

    def details(self) -> dict[str, Any]:
        return {"s": self.s, "ds": self.ds, "accepted": self.accepted}


class BudgetExceeded(NumericError):
    """
    Raised when a Monte-Carlo run exhausts its wall-time budget.

    Attributes:
        estimate: Estimate over the batches that finished in time
    """

    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate

    def details(self) -> dict[str, Any]:
        return {"estimate": self.estimate.to_dict()} if self.estimate is not None else {}


class GridTooShort(NumericError):
    """Raised when a convergence scan has too few usable grid points for a slope fit."""

    def __init__(self, points: int, required: int = 4):
        super().__init__(f"slope fit needs at least {required} grid points, got {points}")
        self.points = points
        self.required = required

    def details(self) -> dict[str, Any]:
        return {"points": self.points, "required": self.required}
