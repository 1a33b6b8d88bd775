"""Pydantic models for diagnostics output: entropy reports, convergence tables, checks.

These are the records the experiments emit as CSV or Parquet rows.
"""

from datetime import UTC, datetime
from typing import Any

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator


class EntropyReport(BaseModel):
    """Per-cell semidiscrete entropy residual of one state.

    Attributes:
        t: Time of the sampled state.
        residual: r_k per cell.
        max_abs: max |r_k|.
        max_positive: max(0, max r_k).
        total_entropy: Sum of dx U(u_k).
        scale: max(1, max |U|, max |F|), the tolerance scale.
        created_at: When the report was computed.
    """

    model_config = ConfigDict(frozen=True)

    t: float
    residual: tuple[float, ...]
    max_abs: float = Field(..., ge=0.0)
    max_positive: float = Field(..., ge=0.0)
    total_entropy: float
    scale: float = Field(1.0, ge=1.0)
    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC))

    def conserves(self, tolerance: float = 1e-12) -> bool:
        """max |r_k| within tolerance * scale."""
        return self.max_abs <= tolerance * self.scale

    def dissipates(self, tolerance: float = 1e-12) -> bool:
        """No r_k above tolerance * scale."""
        return self.max_positive <= tolerance * self.scale

    def to_flat_dict(self) -> dict[str, Any]:
        """Row of the entropy time series."""
        return {
            "t": self.t,
            "max_abs_residual": self.max_abs,
            "max_positive_residual": self.max_positive,
            "total_entropy": self.total_entropy,
            "scale": self.scale,
        }


class ConvergenceRow(BaseModel):
    """Errors of one grid against the reference."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    l1: float = Field(..., ge=0.0)
    l2: float = Field(..., ge=0.0)
    linf: float = Field(..., ge=0.0)

    def error(self, norm: str) -> float:
        return {"l1": self.l1, "l2": self.l2, "linf": self.linf}[norm]


class ConvergenceTable(BaseModel):
    """Errors over a sequence of grids.

    Attributes:
        rows: One row per grid, N strictly increasing.
        p: Half-order of the scheme.
        q: Boundary order.
        metadata: Free-form run information (grid rule, end time, reference).
    """

    rows: list[ConvergenceRow] = Field(default_factory=list)
    p: int | None = None
    q: int | None = None
    metadata: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_increasing(self) -> "ConvergenceTable":
        ns = self.ns
        if any(b <= a for a, b in zip(ns, ns[1:], strict=False)):
            raise ValueError(f"grid sizes must be strictly increasing, got {ns}")
        return self

    @property
    def ns(self) -> list[int]:
        return [row.n for row in self.rows]

    def errors(self, norm: str = "l1") -> list[float]:
        return [row.error(norm) for row in self.rows]

    def to_dataframe(self) -> pd.DataFrame:
        """Columns N, e1, e2, einf."""
        return pd.DataFrame(
            {
                "N": self.ns,
                "e1": self.errors("l1"),
                "e2": self.errors("l2"),
                "einf": self.errors("linf"),
            }
        )


class CheckResult(BaseModel):
    """Outcome of one property check.

    Attributes:
        name: Check identifier.
        passed: Whether the property held.
        value: Measured quantity (residual, slope, defect).
        threshold: Bound the value was compared against.
        detail: Human-readable summary.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    value: float | None = None
    threshold: float | None = None
    detail: str = ""
