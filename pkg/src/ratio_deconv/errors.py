"""Exception hierarchy.

The CLI maps these onto exit codes: configuration-type errors (``DomainError``,
``ValidationError``, ``ConfigError``, ``CapabilityError``, ``ContractError``,
``UnknownCaseError``) exit with 2, numeric failures (``NumericError``,
``ConvergenceError``) exit with 3.
"""
from __future__ import annotations


class RatioDeconvError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RatioDeconvError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ValidationError(RatioDeconvError, ValueError):
    """Malformed distribution spec, problem or serialized document."""


class ConfigError(RatioDeconvError, ValueError):
    """Inconsistent numeric configuration (grid, inversion settings, tolerances)."""


class ContractError(RatioDeconvError, ValueError):
    """Caller violated a documented precondition, e.g. unsorted samples."""


class CapabilityError(RatioDeconvError):
    """Requested operation is not available for this family, kernel or method."""


class UnknownCaseError(RatioDeconvError, KeyError):
    """Verification case name not present in the registry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown case"


class ConvergenceError(RatioDeconvError, ArithmeticError):
    """A series or iterative scheme did not reach its tolerance.

    Attributes
    ----------
    partial_value
        The last partial sum (or estimate) reached.
    n_terms
        Number of terms or nodes used before giving up.
    """

    def __init__(self, message: str, partial_value=None, n_terms: int | None = None):
        super().__init__(message)
        self.partial_value = partial_value
        self.n_terms = n_terms


class NumericError(RatioDeconvError, ArithmeticError):
    """Non-finite intermediate value or failed quadrature.

    ``context`` carries whatever locates the failure (transform node,
    evaluation point, pipeline stage, quadrature residual).
    """

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class CoverageError(NumericError):
    """A density grid does not cover enough of its support for the requested integral."""

    def __init__(self, message: str, tail_mass: float, **context):
        super().__init__(message, tail_mass=tail_mass, **context)
        self.tail_mass = tail_mass
