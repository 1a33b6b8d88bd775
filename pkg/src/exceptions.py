"""Custom exception hierarchy for Entropy Boundary Fluxes.

All custom exceptions inherit from EBFError to enable catching any
project-specific exception while preserving the ability to catch
specific error types. The CLI maps ConfigurationError to exit code 2
and NumericalError to exit code 3.
"""

from typing import Any


class EBFError(Exception):
    """Base exception for all Entropy Boundary Fluxes errors.

    Args:
        message: Human-readable error description.
        details: Optional dictionary with additional context about the error.
    """

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


# Configuration Errors
class ConfigurationError(EBFError):
    """Error in configuration loading or validation."""

    def __init__(
        self,
        message: str,
        field: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        details = details or {}
        if field is not None:
            details["field"] = field
        super().__init__(message, details)
        self.field = field


class InvalidOrderError(ConfigurationError):
    """Requested boundary order q is outside 1..2p-1 (or p < 1)."""

    pass


class GridTooSmallError(ConfigurationError):
    """Grid has fewer cells than the flux stencils need."""

    pass


class MisalignedStepError(ConfigurationError):
    """Forward-facing-step edges do not fall on cell faces."""

    pass


class BlendPositivityError(ConfigurationError):
    """A matrix in use has a negative (0,1)/(1,0) entry but blending was requested."""

    pass


# Numerical Errors
class NumericalError(EBFError):
    """Error raised by a numerical computation."""

    pass


class NonPhysicalStateError(NumericalError):
    """A state left the admissible set (density or pressure not positive, NaN)."""

    def __init__(
        self,
        message: str,
        step: int | None = None,
        time: float | None = None,
        cell: int | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        details = details or {}
        if step is not None:
            details["step"] = step
        if time is not None:
            details["time"] = time
        if cell is not None:
            details["cell"] = cell
        super().__init__(message, details)
        self.step = step
        self.time = time
        self.cell = cell


class SingularSystemError(NumericalError):
    """Exact moment system has no solution."""

    pass


class ZeroWavespeedError(NumericalError):
    """CFL step requested for a field with zero wavespeed and no time cap."""

    pass


class ZeroErrorError(NumericalError):
    """Convergence table contains a non-positive error, so no order exists."""

    pass


# Data Errors
class DataError(EBFError):
    """Input data has the wrong shape or content."""

    pass


class WindowMismatchError(DataError):
    """State window length does not match the flux matrix stencil."""

    pass


class IncompatibleGridsError(DataError):
    """Fine grid cannot be restricted onto the coarse grid."""

    pass


class EmptyDataError(DataError):
    """Nothing to plot or tabulate."""

    pass


# Storage Errors
class StorageError(EBFError):
    """Error during result or cache storage operations."""

    pass


class WriteError(StorageError):
    """Error writing data to storage."""

    pass


class ReadError(StorageError):
    """Error reading data from storage."""

    pass
