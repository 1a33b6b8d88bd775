"""SVG plots of experiment results.

Figures are built through matplotlib.figure.Figure directly, without pyplot
state, so plotting works headless and from worker processes.
"""

from collections.abc import Mapping
from pathlib import Path

import numpy as np
import structlog
from matplotlib.figure import Figure
from numpy.typing import NDArray

from src.exceptions import EmptyDataError, WriteError
from src.models.reports import ConvergenceTable
from src.schemes.scheme2d import Grid2D

logger = structlog.get_logger(__name__)

CONTOUR_LEVELS = 30
GUIDE_SLOPES = (4, 6)


def _save(fig: Figure, target: Path) -> Path:
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(target, format="svg", bbox_inches="tight")
    except OSError as e:
        raise WriteError(f"Failed to save plot {target}: {e}", details={"path": str(target)}) from e
    logger.info("plot_written", path=str(target))
    return target


def plot_profiles(
    x: NDArray, profiles: Mapping[float, NDArray], target: Path, ylabel: str = "u"
) -> Path:
    """Line plot of one scalar profile per time.

    Raises:
        EmptyDataError: If there is nothing to plot.
    """
    if not profiles or len(x) == 0:
        raise EmptyDataError("no profiles to plot", details={"target": str(target)})
    fig = Figure(figsize=(7, 4))
    ax = fig.subplots()
    for t, values in sorted(profiles.items()):
        ax.plot(x, np.asarray(values).reshape(len(x), -1)[:, 0], label=f"t = {t:g}")
    ax.set_xlabel("x")
    ax.set_ylabel(ylabel)
    ax.legend()
    return _save(fig, target)


def plot_series(t: NDArray, values: NDArray, target: Path, ylabel: str, log: bool = True) -> Path:
    """Time series such as the maximal entropy residual."""
    if len(t) == 0:
        raise EmptyDataError("empty series", details={"target": str(target)})
    fig = Figure(figsize=(7, 4))
    ax = fig.subplots()
    values = np.asarray(values, dtype=np.float64)
    if log:
        ax.semilogy(t, np.maximum(values, np.finfo(float).tiny), marker="o")
    else:
        ax.plot(t, values, marker="o")
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    return _save(fig, target)


def plot_convergence(
    tables: Mapping[str, ConvergenceTable],
    target: Path,
    norm: str = "l1",
    guides: tuple[int, ...] = GUIDE_SLOPES,
) -> Path:
    """Log-log error plot with dashed reference slopes.

    Raises:
        EmptyDataError: If no table has rows.
    """
    tables = {label: table for label, table in tables.items() if table.rows}
    if not tables:
        raise EmptyDataError("no convergence data to plot", details={"target": str(target)})
    fig = Figure(figsize=(6, 5))
    ax = fig.subplots()
    for label, table in tables.items():
        ax.loglog(table.ns, table.errors(norm), marker="o", label=label)

    ns = np.asarray(sorted({n for table in tables.values() for n in table.ns}), dtype=np.float64)
    anchor = max(max(table.errors(norm)) for table in tables.values())
    for slope in guides:
        guide = anchor * (ns / ns[0]) ** (-slope)
        ax.loglog(ns, guide, "k--", linewidth=0.8, label=f"slope {slope}")
    ax.set_xlabel("N")
    ax.set_ylabel(f"{norm} error")
    ax.legend()
    return _save(fig, target)


def plot_contour(
    grid: Grid2D,
    values: NDArray,
    target: Path,
    title: str = "",
    levels: int = CONTOUR_LEVELS,
) -> Path:
    """Equispaced contour lines of a cell field; solid cells are masked out."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyDataError("empty field", details={"target": str(target)})
    masked = np.ma.masked_array(values, mask=grid.solid)
    lines = contour_levels(values, grid.solid, levels)
    fig = Figure(figsize=(9, 3.4))
    ax = fig.subplots()
    if lines[-1] > lines[0]:
        ax.contour(
            grid.x_centers, grid.y_centers, masked.T, levels=lines, colors="k", linewidths=0.5
        )
    ax.set_aspect("equal")
    ax.set_xlim(0.0, grid.length)
    ax.set_ylim(0.0, grid.height)
    if title:
        ax.set_title(title)
    return _save(fig, target)


def contour_levels(
    values: NDArray, solid: NDArray | None = None, levels: int = CONTOUR_LEVELS
) -> NDArray:
    """The equispaced levels plot_contour draws."""
    values = np.ma.masked_array(np.asarray(values, dtype=np.float64), mask=solid)
    return np.linspace(float(values.min()), float(values.max()), levels)
