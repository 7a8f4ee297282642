"""
Exception hierarchy for lpbounds.
"""

from typing import Any, Dict, Optional


class LpBoundsError(Exception):
    """Base class for every error raised by lpbounds."""


class DomainError(LpBoundsError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class UsageError(LpBoundsError, ValueError):
    """A checker was called with a configuration it does not apply to."""


class LogConcavityError(DomainError):
    """A density construction would not be log-concave."""


class SymmetryError(DomainError):
    """A density was declared symmetric but fails the mirrored-point check."""


class NonConvergenceError(LpBoundsError, RuntimeError):
    """
    A numerical procedure failed to meet its tolerance.

    Attributes:
        best_estimate: Best value available when the procedure stopped
        abs_error_estimate: Error estimate attached to ``best_estimate``
    """

    def __init__(
        self,
        message: str,
        best_estimate: Optional[float] = None,
        abs_error_estimate: Optional[float] = None,
    ) -> None:
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abs_error_estimate = abs_error_estimate


class DensitySpecError(LpBoundsError):
    """A density spec file could not be parsed."""

    def __init__(self, message: str, location: str = "") -> None:
        detail = f"{message} (at {location})" if location else message
        super().__init__(detail)
        self.location = location


class CounterexampleFound(LpBoundsError):
    """
    A search produced a tightness ratio above ``1 + tol``.

    Attributes:
        ratio: The offending tightness ratio
        witness: Spec dictionary of the density that produced it
    """

    def __init__(self, message: str, ratio: float, witness: Dict[str, Any]) -> None:
        super().__init__(message)
        self.ratio = ratio
        self.witness = witness


class StochasticCheckError(LpBoundsError):
    """A Monte Carlo interval excluded the exact value, also after a rerun."""
