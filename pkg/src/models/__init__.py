"""Data models for Entropy Boundary Fluxes."""

from src.models.reports import (
    CheckResult,
    ConvergenceRow,
    ConvergenceTable,
    EntropyReport,
)
from src.models.run import RunConfig
from src.models.states import EulerState

__all__ = [
    "CheckResult",
    "ConvergenceRow",
    "ConvergenceTable",
    "EntropyReport",
    "EulerState",
    "RunConfig",
]
