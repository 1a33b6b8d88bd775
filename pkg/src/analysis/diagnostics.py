"""Entropy residuals, conservation defects, error norms and convergence orders.

The per-cell entropy residual of a state u is

    r_k = <v_k, (f_{k-1/2} - f_{k+1/2}) / dx> + (F_{k+1/2} - F_{k-1/2}) / dx

with f the combined fluxes and F the matching numerical entropy fluxes.
It vanishes for entropy conservative configurations and is <= 0 per cell
when the dissipative flux is blended in.
"""

from typing import NamedTuple

import numpy as np
import structlog
from numpy.typing import NDArray

from src.exceptions import EmptyDataError, IncompatibleGridsError, ZeroErrorError
from src.models.reports import ConvergenceTable, EntropyReport
from src.physics.equations import ConservationLaw
from src.schemes.scheme1d import Grid1D, SchemeConfig, interface_fluxes
from src.schemes.scheme2d import Grid2D, rhs2d, sweep_fluxes

logger = structlog.get_logger(__name__)


def total_entropy(state: NDArray, law: ConservationLaw, dx: float) -> float:
    """Sum of dx U(u_k)."""
    return float(dx * np.sum(law.entropy(state)))


def flux_scale(state: NDArray, law: ConservationLaw, axis: int = 0) -> float:
    """max(1, max |u|, max |f(u)|), the scale of conservation defects."""
    state = np.asarray(state, dtype=np.float64)
    if state.size == 0:
        return 1.0
    return float(max(1.0, np.max(np.abs(state)), np.max(np.abs(law.flux(state, axis)))))


def entropy_residual_field(
    grid: Grid1D, state: NDArray, cfg: SchemeConfig, t: float = 0.0
) -> EntropyReport:
    """Semidiscrete entropy residual of every cell.

    Raises:
        NonPhysicalStateError: If a state is not admissible.
    """
    law = cfg.law
    flux, entropy_flux = interface_fluxes(grid, state, cfg, t, with_entropy=True)
    assert entropy_flux is not None
    v = law.entropy_variables(state)
    residual = (
        np.sum(v * (flux[:-1] - flux[1:]), axis=-1) + (entropy_flux[1:] - entropy_flux[:-1])
    ) / grid.dx
    residual = np.asarray(residual, dtype=np.float64)
    U = law.entropy(state)
    scale = float(max(1.0, np.max(np.abs(U)), np.max(np.abs(entropy_flux))))
    return EntropyReport(
        t=t,
        residual=tuple(residual.tolist()),
        max_abs=float(np.max(np.abs(residual))),
        max_positive=float(max(0.0, np.max(residual))),
        total_entropy=total_entropy(state, law, grid.dx),
        scale=scale,
    )


def conservation_check(grid: Grid1D, state: NDArray, cfg: SchemeConfig, t: float = 0.0) -> float:
    """|dx sum_k rhs_k - (f_{1/2} - f_{N+1/2})|, maximized over components."""
    flux = interface_fluxes(grid, state, cfg, t).flux
    rhs = (flux[:-1] - flux[1:]) / grid.dx
    defect = grid.dx * np.sum(rhs, axis=0) - (flux[0] - flux[-1])
    return float(np.max(np.abs(defect)))


def conservation_check_2d(grid: Grid2D, field: NDArray, cfg: SchemeConfig, t: float = 0.0) -> float:
    """Global balance defect over the fluid cells.

    Compares dx dy sum(rhs) with the flux through the faces bounding the
    fluid: domain walls, inflow, outflow and the two step faces.
    """
    rhs = rhs2d(grid, field, cfg, t)
    fx = sweep_fluxes(grid, field, cfg, t, axis=0).flux
    gy = sweep_fluxes(grid, field, cfg, t, axis=1).flux

    # end faces of each fluid run: rows end at the step face, columns start on top of it
    last_x = np.full(grid.ny, grid.nx)
    first_y = np.zeros(grid.nx, dtype=int)
    if grid.has_step:
        assert grid.step_i is not None
        last_x[: grid.step_j] = grid.step_i
        first_y[grid.step_i :] = grid.step_j
    rows = np.arange(grid.ny)
    cols = np.arange(grid.nx)
    through_x = np.sum(fx[0, rows] - fx[last_x, rows], axis=0) * grid.dy
    through_y = np.sum(gy[first_y, cols] - gy[grid.ny, cols], axis=0) * grid.dx

    inside = np.sum(rhs[grid.fluid], axis=0) * grid.dx * grid.dy
    return float(np.max(np.abs(inside - through_x - through_y)))


def restrict(fine: NDArray, n_coarse: int) -> NDArray:
    """Block averages of a fine field onto n_coarse cells.

    Raises:
        IncompatibleGridsError: If the fine size is not a multiple of n_coarse.
    """
    fine = np.asarray(fine, dtype=np.float64)
    n_fine = len(fine)
    if n_coarse < 1 or n_fine % n_coarse != 0:
        raise IncompatibleGridsError(
            "fine grid size must be a multiple of the coarse one",
            details={"n_fine": n_fine, "n_coarse": n_coarse},
        )
    ratio = n_fine // n_coarse
    return fine.reshape((n_coarse, ratio) + fine.shape[1:]).mean(axis=1)


def remap(fine: NDArray, n_coarse: int) -> NDArray:
    """Overlap-weighted averages of a piecewise-constant fine field on n_coarse cells.

    Equals restrict() when the sizes divide; otherwise coarse cells take
    the exact integral of the fine cells they overlap.
    """
    fine = np.asarray(fine, dtype=np.float64)
    n_fine = len(fine)
    if n_coarse < 1 or n_coarse > n_fine:
        raise IncompatibleGridsError(
            "coarse grid must not be finer than the reference",
            details={"n_fine": n_fine, "n_coarse": n_coarse},
        )
    flat = fine.reshape(n_fine, -1)
    cumulative = np.vstack([np.zeros((1, flat.shape[1])), np.cumsum(flat, axis=0) / n_fine])
    fine_edges = np.linspace(0.0, 1.0, n_fine + 1)
    coarse_edges = np.linspace(0.0, 1.0, n_coarse + 1)
    at_edges = np.column_stack(
        [np.interp(coarse_edges, fine_edges, cumulative[:, c]) for c in range(flat.shape[1])]
    )
    return (np.diff(at_edges, axis=0) * n_coarse).reshape((n_coarse,) + fine.shape[1:])


class ErrorNorms(NamedTuple):
    """Discrete dx-weighted norms of a coarse-minus-reference difference."""

    l1: float
    l2: float
    linf: float


def error_norms(coarse: NDArray, fine: NDArray, length: float, strict: bool = True) -> ErrorNorms:
    """L1, L2 and Linf distance of a coarse field from a restricted fine one.

    Args:
        coarse: Coarse cell values, shape (N, ...).
        fine: Fine reference, shape (k N, ...).
        length: Domain length; dx = length / N.
        strict: Require k to be an integer (block averaging); otherwise
            the fine field is remapped by overlap.

    Raises:
        IncompatibleGridsError: If the grids cannot be matched.
    """
    coarse = np.asarray(coarse, dtype=np.float64)
    matched = restrict(fine, len(coarse)) if strict else remap(fine, len(coarse))
    diff = np.abs(coarse - matched)
    dx = length / len(coarse)
    return ErrorNorms(
        l1=float(dx * np.sum(diff)),
        l2=float(np.sqrt(dx * np.sum(diff**2))),
        linf=float(np.max(diff)),
    )


class ConvergenceOrders(NamedTuple):
    """Pairwise orders between adjacent grids and the least-squares slope."""

    pairwise: list[float]
    slope: float


def eoc(table: ConvergenceTable, norm: str = "l1") -> ConvergenceOrders:
    """Experimental orders of convergence of one error norm.

    Raises:
        EmptyDataError: If the table has fewer than two rows.
        ZeroErrorError: If an error is not positive.
    """
    if len(table.rows) < 2:
        raise EmptyDataError("need at least two grids", details={"rows": len(table.rows)})
    errors = np.asarray(table.errors(norm), dtype=np.float64)
    if np.any(errors <= 0.0):
        raise ZeroErrorError(
            "errors must be positive to define an order",
            details={"norm": norm, "errors": errors.tolist()},
        )
    log_n = np.log(np.asarray(table.ns, dtype=np.float64))
    log_e = np.log(errors)
    pairwise = (-(np.diff(log_e) / np.diff(log_n))).tolist()
    slope = -float(np.polyfit(log_n, log_e, 1)[0])
    logger.debug("eoc_computed", norm=norm, slope=slope)
    return ConvergenceOrders(pairwise=pairwise, slope=slope)
