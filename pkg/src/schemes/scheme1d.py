"""Semidiscrete 1D finite-volume scheme with boundary-aware combined fluxes.

Cells are numbered 0..N-1 and interfaces 0..N, interface i sitting between
cells i-1 and i. Each interface flux is evaluated once and shared by both
neighbours, so the update telescopes exactly:

    du_k/dt = (f_{k} - f_{k+1}) / dx      (interface indices)

Inflow and outflow sides carry their data in one ghost cell and switch to
the boundary matrix family near the wall. Periodic and reflective sides
use the interior matrix everywhere over a halo of width p.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Protocol

import numpy as np
import structlog
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import (
    BlendPositivityError,
    ConfigurationError,
    GridTooSmallError,
)
from src.fluxes.fluxcomb import (
    FluxFamily,
    FluxMatrix,
    blend_positivity_check,
    boundary_matrices,
    combined_entropy_flux_along,
    combined_flux_along,
)
from src.physics.equations import ConservationLaw, max_wavespeed
from src.physics.twopoint import entropy_conservative_flux, entropy_dissipative_flux
from src.utils.config import SchemeSettings

logger = structlog.get_logger(__name__)


class Grid1D(BaseModel):
    """Uniform cells on [lower, upper] with a halo on each side.

    Attributes:
        n: Number of interior cells.
        lower: Left end of the domain.
        upper: Right end of the domain.
        halo: Ghost layers per side.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    lower: float = 0.0
    upper: float = 1.0
    halo: int = Field(1, ge=1)

    @model_validator(mode="after")
    def validate_domain(self) -> "Grid1D":
        if not self.upper > self.lower:
            raise ValueError(f"empty domain [{self.lower}, {self.upper}]")
        return self

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def dx(self) -> float:
        return (self.upper - self.lower) / self.n

    @property
    def centers(self) -> NDArray[np.float64]:
        """x_k = lower + (k + 1/2) dx."""
        return self.lower + (np.arange(self.n) + 0.5) * self.dx


class BoundaryKind(str, Enum):
    """Boundary treatment of one domain end."""

    PERIODIC = "periodic"
    INFLOW = "inflow"
    OUTFLOW = "outflow"
    REFLECTIVE = "reflective"


StateCallback = Callable[[float], NDArray]


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary treatment plus, for inflow, the prescribed state u(t)."""

    kind: BoundaryKind
    state: StateCallback | None = None

    def __post_init__(self) -> None:
        if self.kind == BoundaryKind.INFLOW and self.state is None:
            raise ConfigurationError("inflow boundary needs a state callback", field="state")

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.PERIODIC)

    @classmethod
    def inflow(cls, state: StateCallback) -> "BoundaryCondition":
        return cls(BoundaryKind.INFLOW, state)

    @classmethod
    def outflow(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.OUTFLOW)

    @classmethod
    def reflective(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.REFLECTIVE)

    @property
    def uses_boundary_matrices(self) -> bool:
        return self.kind in (BoundaryKind.INFLOW, BoundaryKind.OUTFLOW)


@dataclass(frozen=True)
class BoundaryPair:
    """Left and right boundary conditions of a line."""

    left: BoundaryCondition = field(default_factory=BoundaryCondition.periodic)
    right: BoundaryCondition = field(default_factory=BoundaryCondition.periodic)

    def __post_init__(self) -> None:
        periodic = [bc.kind == BoundaryKind.PERIODIC for bc in (self.left, self.right)]
        if any(periodic) and not all(periodic):
            raise ConfigurationError(
                "periodic boundaries must be set on both sides",
                field="boundary",
                details={"left": self.left.kind.value, "right": self.right.kind.value},
            )


class AlphaProvider(Protocol):
    """Blend weight per interface from the two adjacent states."""

    def __call__(self, u_left: NDArray, u_right: NDArray) -> NDArray | float: ...


@dataclass(frozen=True)
class ConstantAlpha:
    """The same weight at every interface."""

    value: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ConfigurationError(
                "alpha must lie in [0, 1]", field="alpha_const", details={"value": self.value}
            )

    def __call__(self, u_left: NDArray, u_right: NDArray) -> float:
        return self.value


@dataclass(frozen=True)
class JumpSensorAlpha:
    """alpha = min(1, c |u_R - u_L| / (|u_L| + |u_R| + eps)) with Euclidean norms."""

    c: float = 1.0
    eps: float = 1e-12

    def __call__(self, u_left: NDArray, u_right: NDArray) -> NDArray:
        jump = np.linalg.norm(u_right - u_left, axis=-1)
        size = np.linalg.norm(u_left, axis=-1) + np.linalg.norm(u_right, axis=-1) + self.eps
        return np.minimum(1.0, self.c * jump / size)


def alpha_provider(
    kind: str = "constant", value: float = 0.0, c: float = 1.0, eps: float = 1e-12
) -> AlphaProvider:
    """Build a blend-weight provider.

    Args:
        kind: "constant" or "jump".
        value: Weight of the constant provider.
        c: Jump sensor gain.
        eps: Jump sensor regularization.
    """
    if kind == "constant":
        return ConstantAlpha(value)
    if kind == "jump":
        return JumpSensorAlpha(c=c, eps=eps)
    raise ConfigurationError(f"unknown alpha provider {kind!r}", field="alpha_kind")


@dataclass(frozen=True)
class SchemeConfig:
    """Spatial discretization choices independent of the grid.

    Attributes:
        law: Conservation law.
        p: Half-order of the interior flux.
        family: Two-point fluxes for the matrix entries.
        q: Boundary order, defaults to 2p-1.
        alpha: Blend weight provider; only consulted when the family blends.
        boundary: Boundary conditions of the line (x-lines in 2D).

    Raises:
        InvalidOrderError: If q is outside 1..2p-1.
        BlendPositivityError: If blending is requested and a matrix in use
            has a negative (0,1) entry.
    """

    law: ConservationLaw
    p: int
    family: FluxFamily
    q: int | None = None
    alpha: AlphaProvider = field(default_factory=ConstantAlpha)
    boundary: BoundaryPair = field(default_factory=BoundaryPair)

    def __post_init__(self) -> None:
        if self.q is None:
            object.__setattr__(self, "q", 2 * self.p - 1)
        # builds the family and validates p and q
        boundary_matrices(self.p, self.boundary_order)
        if self.family.blends:
            for matrix in self.matrices_in_use:
                if not blend_positivity_check(matrix):
                    raise BlendPositivityError(
                        "blending needs nonnegative (0,1) entries",
                        field="alpha",
                        details={"p": self.p, "q": self.q, "index": matrix.index},
                    )

    @property
    def boundary_order(self) -> int:
        return self.q if self.q is not None else 2 * self.p - 1

    @property
    def matrices(self) -> dict[int, FluxMatrix]:
        return boundary_matrices(self.p, self.boundary_order)

    @property
    def matrices_in_use(self) -> list[FluxMatrix]:
        family = self.matrices
        used = [family[0]]
        if self.boundary.left.uses_boundary_matrices:
            used.extend(family[-s] for s in range(1, self.p + 1))
        if self.boundary.right.uses_boundary_matrices:
            used.extend(family[s] for s in range(1, self.p + 1))
        return used

    @classmethod
    def from_settings(
        cls,
        law: ConservationLaw,
        settings: SchemeSettings,
        boundary: BoundaryPair | None = None,
        dissipative: bool = False,
    ) -> "SchemeConfig":
        """Build a config from the scheme section of the application settings."""
        family = FluxFamily(
            ec=entropy_conservative_flux(law),
            dissipative=entropy_dissipative_flux(law) if dissipative else None,
            swap_dissipative_arguments=settings.swap_dissipative_arguments,
        )
        alpha = alpha_provider(
            settings.alpha_kind, settings.alpha_const, settings.jump_c, settings.jump_eps
        )
        return cls(
            law=law,
            p=settings.p,
            family=family,
            q=settings.boundary_order,
            alpha=alpha,
            boundary=boundary or BoundaryPair(),
        )


def _fill_side(
    ext: NDArray,
    state: NDArray,
    bc: BoundaryCondition,
    t: float,
    halo: int,
    law: ConservationLaw,
    axis: int,
    left: bool,
) -> None:
    n = len(state)
    ghosts = slice(0, halo) if left else slice(halo + n, 2 * halo + n)
    if bc.kind == BoundaryKind.PERIODIC:
        ext[ghosts] = state[n - halo :] if left else state[:halo]
    elif bc.kind == BoundaryKind.INFLOW:
        assert bc.state is not None
        ext[ghosts] = np.broadcast_to(np.asarray(bc.state(t)), ext[ghosts].shape)
    elif bc.kind == BoundaryKind.OUTFLOW:
        ext[ghosts] = state[0] if left else state[n - 1]
    else:
        inner = state[:halo] if left else state[n - halo :]
        ext[ghosts] = law.mirror(inner[::-1], axis)


def fill_ghosts(
    state: NDArray,
    boundary: BoundaryPair,
    t: float,
    halo: int,
    law: ConservationLaw,
    axis: int = 0,
) -> NDArray:
    """Extend a line of states by `halo` ghost layers per side.

    Inflow fills the halo with u(t), outflow with a copy of the adjacent
    cell; only the first layer is read by the boundary matrices. Reflective
    sides mirror `halo` cells with the normal velocity negated and periodic
    sides wrap.

    Args:
        state: Shape (N, ..., n_vars); axis 0 runs along the line.
        boundary: Conditions at both ends.
        t: Time passed to inflow callbacks.
        halo: Ghost layers per side.
        law: Law providing the wall mirror.
        axis: Physical direction of the line.

    Raises:
        GridTooSmallError: If the line is shorter than the halo.
    """
    n = len(state)
    if n < halo:
        raise GridTooSmallError(
            "line shorter than its halo", field="n", details={"n": n, "halo": halo}
        )
    ext = np.empty((n + 2 * halo,) + state.shape[1:], dtype=state.dtype)
    ext[halo : halo + n] = state
    _fill_side(ext, state, boundary.left, t, halo, law, axis, left=True)
    _fill_side(ext, state, boundary.right, t, halo, law, axis, left=False)
    return ext


def interface_matrix(
    interface: int,
    n: int,
    matrices: dict[int, FluxMatrix],
    left_boundary: bool = True,
    right_boundary: bool = True,
) -> FluxMatrix:
    """Matrix used at `interface` (0..n) of an n-cell line.

    Raises:
        GridTooSmallError: If n < 2p + 1.
    """
    p = matrices[0].p
    if n < 2 * p + 1:
        raise GridTooSmallError(
            f"need at least {2 * p + 1} cells for p={p}", field="n", details={"n": n, "p": p}
        )
    if left_boundary and interface < p:
        return matrices[-(p - interface)]
    if right_boundary and interface > n - p:
        return matrices[interface - (n - p)]
    return matrices[0]


def _segments(
    n: int, p: int, left_boundary: bool, right_boundary: bool
) -> list[tuple[int, int, int]]:
    """(start, stop, matrix index) runs of interfaces sharing one matrix."""
    start = p if left_boundary else 0
    stop = n - p + 1 if right_boundary else n + 1
    runs = [(i, i + 1, -(p - i)) for i in range(start)] if left_boundary else []
    runs.append((start, stop, 0))
    if right_boundary:
        runs.extend((i, i + 1, i - (n - p)) for i in range(stop, n + 1))
    return runs


class LineFluxes(NamedTuple):
    """Interface fluxes of a line, with matching entropy fluxes on request."""

    flux: NDArray
    entropy: NDArray | None


def line_fluxes(
    ext: NDArray,
    n: int,
    halo: int,
    cfg: SchemeConfig,
    axis: int = 0,
    left_boundary: bool = False,
    right_boundary: bool = False,
    with_entropy: bool = False,
) -> LineFluxes:
    """Fluxes at the n + 1 interfaces of an extended line (axis 0 of `ext`).

    Raises:
        GridTooSmallError: If n < 2p + 1.
    """
    p = cfg.p
    if n < 2 * p + 1:
        raise GridTooSmallError(
            f"need at least {2 * p + 1} cells for p={p}", field="n", details={"n": n, "p": p}
        )
    matrices = cfg.matrices
    alpha = None
    if cfg.family.blends:
        alpha = cfg.alpha(ext[halo - 1 : halo + n], ext[halo : halo + n + 1])

    flux = np.empty((n + 1,) + ext.shape[1:], dtype=ext.dtype)
    entropy = np.empty((n + 1,) + ext.shape[1:-1], dtype=ext.dtype) if with_entropy else None
    for start, stop, index in _segments(n, p, left_boundary, right_boundary):
        a = alpha[start:stop] if isinstance(alpha, np.ndarray) else alpha
        first = halo + start - 1
        flux[start:stop] = combined_flux_along(
            matrices[index], cfg.family, ext, first, stop - start, axis, a
        )
        if entropy is not None:
            entropy[start:stop] = combined_entropy_flux_along(
                matrices[index], cfg.family, ext, first, stop - start, axis, a, law=cfg.law
            )
    return LineFluxes(flux, entropy)


def interface_fluxes(
    grid: Grid1D,
    state: NDArray,
    cfg: SchemeConfig,
    t: float,
    with_entropy: bool = False,
) -> LineFluxes:
    """Fill ghosts and evaluate all N + 1 interface fluxes of a 1D field.

    Raises:
        NonPhysicalStateError: If a cell state is not admissible.
        GridTooSmallError: If N < 2p + 1 or the halo is narrower than p.
    """
    if grid.halo < cfg.p:
        raise GridTooSmallError(
            "halo narrower than p", field="halo", details={"halo": grid.halo, "p": cfg.p}
        )
    cfg.law.check_admissible(state)
    ext = fill_ghosts(state, cfg.boundary, t, grid.halo, cfg.law)
    return line_fluxes(
        ext,
        grid.n,
        grid.halo,
        cfg,
        axis=0,
        left_boundary=cfg.boundary.left.uses_boundary_matrices,
        right_boundary=cfg.boundary.right.uses_boundary_matrices,
        with_entropy=with_entropy,
    )


def rhs(grid: Grid1D, state: NDArray, cfg: SchemeConfig, t: float) -> NDArray:
    """Semidiscrete time derivative (f_{k-1/2} - f_{k+1/2}) / dx per cell."""
    flux = interface_fluxes(grid, state, cfg, t).flux
    return (flux[:-1] - flux[1:]) / grid.dx


class Scheme1D:
    """A SchemeConfig bound to a grid, as consumed by the time integrator.

    Args:
        grid: Cells and halo.
        config: Spatial discretization.

    Example:
        scheme = Scheme1D(Grid1D(n=100, lower=-10, upper=10, halo=3), config)
        du = scheme.rhs(u, 0.0)
    """

    def __init__(self, grid: Grid1D, config: SchemeConfig) -> None:
        self.grid = grid
        self.config = config
        self._log = logger.bind(component="scheme1d", p=config.p, q=config.q, n=grid.n)
        interface_matrix(0, grid.n, config.matrices)
        self._log.debug(
            "scheme_ready",
            left=config.boundary.left.kind.value,
            right=config.boundary.right.kind.value,
        )

    def rhs(self, state: NDArray, t: float) -> NDArray:
        return rhs(self.grid, state, self.config, t)

    def fluxes(self, state: NDArray, t: float, with_entropy: bool = False) -> LineFluxes:
        return interface_fluxes(self.grid, state, self.config, t, with_entropy)

    def wavespeed(self, state: NDArray) -> float:
        return max_wavespeed(state, self.config.law)
