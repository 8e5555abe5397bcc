"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CasimirError(Exception):
    """Base class for all package errors."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(CasimirError, ArithmeticError):
    """Evaluation requested at (or too close to) a pole.

    ``residual`` is the magnitude of the vanishing denominator, so callers
    can tell how close the point was.
    """

    def __init__(self, message: str, residual: float = 0.0):
        super().__init__(message)
        self.residual = residual


class ExtrapolationError(DomainError):
    """Tabulated data queried outside its sampled range."""


class IngestionError(CasimirError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class UnsupportedConfigError(CasimirError, ValueError):
    """The layer configuration is outside what the solver can handle."""


class ScanFailureError(CasimirError, RuntimeError):
    """The root scan produced an implausible set of roots."""


class DegenerateProfileError(CasimirError, ArithmeticError):
    """Matching conditions are degenerate (e.g. exactly on the light line)."""


class QuadratureError(CasimirError, RuntimeError):
    """Numerical integration did not converge.

    The best available estimate is kept in ``partial``.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ResolutionError(CasimirError, RuntimeError):
    """Phase unwinding failed because the sampling was too coarse."""


class TailError(QuadratureError):
    """Sequence acceleration of an oscillatory tail did not settle.

    ``partial`` holds the list of partial sums.
    """
