"""Dimension-by-dimension 2D Euler scheme on channel and forward-facing-step grids.

Fields have shape (nx, ny, 4), indexed [i, j] with x along axis 0. Both
sweeps reuse the 1D line machinery vectorized over all lines at once:
x-lines carry the SchemeConfig boundary pair (inflow left, outflow right,
with boundary-aware matrices), y-lines are bounded by reflective walls and
use the interior matrix over mirrored halos.

Each sweep builds its own halo. The x halo mirrors the vertical step face,
the y halo mirrors the bottom, top and the step top. The combined fill
(axis=None) runs x then y, so the y mirror wins in the step corner.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog
from numpy.typing import NDArray

from src.exceptions import GridTooSmallError, MisalignedStepError
from src.models.states import EulerState
from src.physics.equations import ConservationLaw, EulerLaw
from src.schemes.scheme1d import (
    BoundaryCondition,
    BoundaryPair,
    LineFluxes,
    SchemeConfig,
    fill_ghosts,
    line_fluxes,
)

logger = structlog.get_logger(__name__)

FFS_LENGTH = 3.0
FFS_HEIGHT = 1.0
FFS_STEP_X = 0.6
FFS_STEP_HEIGHT = 0.2
FFS_INFLOW = EulerState(rho=1.4, vx=3.0, vy=0.0, p=1.0, gamma=1.4)

_WALLS = BoundaryPair(BoundaryCondition.reflective(), BoundaryCondition.reflective())


@dataclass(frozen=True)
class Grid2D:
    """Uniform nx by ny cells on [0, length] x [0, height], optionally with a step.

    Attributes:
        nx: Cells in x.
        ny: Cells in y.
        length: Domain length.
        height: Domain height.
        halo: Ghost layers per side.
        step_i: First solid column, or None without a step.
        step_j: Number of solid rows under the step.
    """

    nx: int
    ny: int
    length: float = FFS_LENGTH
    height: float = FFS_HEIGHT
    halo: int = 2
    step_i: int | None = None
    step_j: int = 0

    @property
    def dx(self) -> float:
        return self.length / self.nx

    @property
    def dy(self) -> float:
        return self.height / self.ny

    @property
    def has_step(self) -> bool:
        return self.step_i is not None and self.step_j > 0

    @property
    def x_centers(self) -> NDArray[np.float64]:
        return (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centers(self) -> NDArray[np.float64]:
        return (np.arange(self.ny) + 0.5) * self.dy

    @cached_property
    def solid(self) -> NDArray[np.bool_]:
        """Mask of cells inside the step, shape (nx, ny)."""
        mask = np.zeros((self.nx, self.ny), dtype=bool)
        if self.has_step:
            mask[self.step_i :, : self.step_j] = True
        return mask

    @property
    def fluid(self) -> NDArray[np.bool_]:
        return ~self.solid


def build_ffs_grid(ny: int, nx: int | None = None, halo: int = 2) -> Grid2D:
    """Forward-facing-step grid on [0,3] x [0,1] with dx = dy.

    The step starts at x = 0.6 and is 0.2 high; a cell is solid iff its
    center has x >= 0.6 and y < 0.2.

    Raises:
        MisalignedStepError: If nx != 3 ny or the step edges miss the cell faces.
    """
    nx = 3 * ny if nx is None else nx
    if nx != 3 * ny or ny % 5 != 0 or ny <= 0:
        raise MisalignedStepError(
            "step edges must fall on cell faces with dx = dy",
            field="ny",
            details={"nx": nx, "ny": ny},
        )
    grid = Grid2D(nx=nx, ny=ny, halo=halo, step_i=nx // 5, step_j=ny // 5)
    logger.debug("ffs_grid_built", nx=nx, ny=ny, step_i=grid.step_i, step_j=grid.step_j)
    return grid


def build_channel_grid(
    ny: int, nx: int, length: float = FFS_LENGTH, height: float = FFS_HEIGHT, halo: int = 2
) -> Grid2D:
    """Rectangular channel without a step."""
    if nx < 1 or ny < 1:
        raise GridTooSmallError("channel needs at least one cell", details={"nx": nx, "ny": ny})
    return Grid2D(nx=nx, ny=ny, length=length, height=height, halo=halo)


def inflow_outflow_boundary(state: EulerState) -> BoundaryPair:
    """Supersonic inflow of `state` on the left, outflow on the right."""
    u_in = state.to_conservative(dim=2)
    return BoundaryPair(BoundaryCondition.inflow(lambda t: u_in), BoundaryCondition.outflow())


def uniform_field(grid: Grid2D, state: EulerState) -> NDArray[np.float64]:
    """Every cell, solid ones included, set to `state`."""
    return np.broadcast_to(state.to_conservative(dim=2), (grid.nx, grid.ny, 4)).copy()


def _fill_x(grid: Grid2D, field: NDArray, t: float, cfg: SchemeConfig) -> NDArray:
    h = grid.halo
    ext = fill_ghosts(field, cfg.boundary, t, h, cfg.law, axis=0)
    if grid.has_step:
        si, sj = grid.step_i, grid.step_j
        assert si is not None
        ext[h + si : h + si + h, :sj] = cfg.law.mirror(field[si - h : si, :sj][::-1], 0)
    return ext


def _fill_y(grid: Grid2D, lines: NDArray, t: float, law: ConservationLaw, offset: int) -> NDArray:
    """y halo of y-major `lines` (ny, m, 4); `offset` is the column of field column 0."""
    h = grid.halo
    ext = fill_ghosts(lines, _WALLS, t, h, law, axis=1)
    if grid.has_step:
        assert grid.step_i is not None
        si, sj = offset + grid.step_i, grid.step_j
        depth = min(h, sj)
        ext[h + sj - depth : h + sj, si:] = law.mirror(lines[sj : sj + depth, si:][::-1], 1)
    return ext


def fill_ghosts_2d(
    grid: Grid2D, field: NDArray, t: float, cfg: SchemeConfig, axis: int | None = None
) -> NDArray:
    """Halo for one sweep direction, or both directions with filled corners.

    Args:
        grid: Grid with optional step.
        field: Conserved field (nx, ny, 4).
        t: Time for inflow data.
        cfg: Scheme config whose boundary pair governs the x-lines.
        axis: 0 returns (nx+2h, ny, 4); 1 returns the y-major (ny+2h, nx, 4);
            None returns (nx+2h, ny+2h, 4) filled x first, then y.
    """
    if axis == 0:
        return _fill_x(grid, field, t, cfg)
    if axis == 1:
        return _fill_y(grid, np.swapaxes(field, 0, 1), t, cfg.law, offset=0)
    ext_x = _fill_x(grid, field, t, cfg)
    ext = _fill_y(grid, np.swapaxes(ext_x, 0, 1), t, cfg.law, offset=grid.halo)
    return np.swapaxes(ext, 0, 1)


def sweep_fluxes(
    grid: Grid2D,
    field: NDArray,
    cfg: SchemeConfig,
    t: float,
    axis: int,
    with_entropy: bool = False,
) -> LineFluxes:
    """Interface fluxes of one sweep.

    Returns x fluxes of shape (nx+1, ny, 4) for axis 0 and y-major fluxes
    of shape (ny+1, nx, 4) for axis 1.
    """
    ext = fill_ghosts_2d(grid, field, t, cfg, axis)
    if axis == 0:
        return line_fluxes(
            ext,
            grid.nx,
            grid.halo,
            cfg,
            axis=0,
            left_boundary=cfg.boundary.left.uses_boundary_matrices,
            right_boundary=cfg.boundary.right.uses_boundary_matrices,
            with_entropy=with_entropy,
        )
    return line_fluxes(ext, grid.ny, grid.halo, cfg, axis=1, with_entropy=with_entropy)


def rhs2d(grid: Grid2D, field: NDArray, cfg: SchemeConfig, t: float) -> NDArray:
    """Sum of the x and y flux differences; solid cells get zero.

    Raises:
        NonPhysicalStateError: If a fluid cell is not admissible.
        GridTooSmallError: If the halo is narrower than p.
    """
    if grid.halo < cfg.p:
        raise GridTooSmallError(
            "halo narrower than p", field="halo", details={"halo": grid.halo, "p": cfg.p}
        )
    cfg.law.check_admissible(field[grid.fluid])
    fx = sweep_fluxes(grid, field, cfg, t, axis=0).flux
    gy = sweep_fluxes(grid, field, cfg, t, axis=1).flux
    out = (fx[:-1] - fx[1:]) / grid.dx + np.swapaxes(gy[:-1] - gy[1:], 0, 1) / grid.dy
    out[grid.solid] = 0.0
    return out


class Scheme2D:
    """A SchemeConfig bound to a 2D grid, as consumed by the time integrator.

    Args:
        grid: Channel or step grid.
        config: Spatial discretization; its boundary pair governs the x-lines.
    """

    def __init__(self, grid: Grid2D, config: SchemeConfig) -> None:
        if not isinstance(config.law, EulerLaw) or config.law.dim != 2:
            raise TypeError("Scheme2D needs a two-dimensional Euler law")
        self.grid = grid
        self.config = config
        self._log = logger.bind(component="scheme2d", nx=grid.nx, ny=grid.ny, p=config.p)

    def rhs(self, field: NDArray, t: float) -> NDArray:
        return rhs2d(self.grid, field, self.config, t)

    def speeds(self, field: NDArray) -> tuple[float, float]:
        """Largest directional wavespeed over fluid cells, used for both directions."""
        fluid = field[self.grid.fluid]
        self.config.law.check_admissible(fluid)
        law = self.config.law
        speed = float(max(np.max(law.wavespeed(fluid, 0)), np.max(law.wavespeed(fluid, 1))))
        return speed, speed

    @property
    def spacing(self) -> tuple[float, float]:
        return self.grid.dx, self.grid.dy
