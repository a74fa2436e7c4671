"""Exceptions for homoclinic-covers."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Sequence

__all__: list[str] = [
    "AcceptanceError",
    "AmbiguousRootError",
    "BranchError",
    "BudgetExceededError",
    "CyclotomicError",
    "HomoclinicConfigurationError",
    "HomoclinicError",
    "InvalidPointError",
    "NumericalError",
    "RepeatedRootError",
    "RootFindingError",
    "WindowError",
]


class HomoclinicError(Exception):
    """Base class for every error raised by homoclinic-covers."""

    exit_code: int = 1


class HomoclinicConfigurationError(HomoclinicError, ValueError):
    """Raised when an operation is given input it cannot work with."""

    exit_code = 1


class WindowError(HomoclinicConfigurationError):
    """Raised when a sequence window is too small for the request."""


class BranchError(HomoclinicConfigurationError):
    """Raised when f is on the wrong side of the expansive/nonexpansive split."""


class InvalidPointError(HomoclinicConfigurationError):
    """Raised when torus coordinates do not describe a point of X_f."""


class RepeatedRootError(HomoclinicConfigurationError):
    """Raised when f has a repeated root."""


class CyclotomicError(HomoclinicConfigurationError):
    """Raised when f has a root of unity and periodic sets are infinite."""


class NumericalError(HomoclinicError, ArithmeticError):
    """Raised when a numerical method fails to meet its tolerance."""

    exit_code = 2


class RootFindingError(NumericalError):
    """Raised when the root finder does not converge."""

    def __init__(self, message: str, residuals: Sequence[float] = ()) -> None:
        """Keep the final residuals for the report."""
        super().__init__(message)
        self.residuals: tuple[float, ...] = tuple(residuals)


class AmbiguousRootError(NumericalError):
    """Raised when a root cannot be certified on or off the unit circle."""


class BudgetExceededError(NumericalError):
    """Raised when an enumeration or search runs past its budget."""


class AcceptanceError(HomoclinicError):
    """Raised when an acceptance criterion fails."""

    exit_code = 3
