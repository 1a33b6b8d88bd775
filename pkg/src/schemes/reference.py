"""Second-order ENO reference solver with a global Lax-Friedrichs flux.

Face states come from a piecewise-linear reconstruction whose slope is
the smaller (in magnitude) of the two one-sided differences; ties take
the left difference. The flux

    F = (f(u-) + f(u+)) / 2 - lambda_max (u+ - u-) / 2

uses one lambda_max per evaluation, taken over the whole extended line.

Fine-grid solutions are cached on disk, one file per (problem, N, T):

    EBFREF\\n
    {"problem": ..., "n": ..., "t_end": ..., "scheme": ..., ...}\\n
    <little-endian float64 cell values>
"""

import os
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.exceptions import ReadError, WriteError
from src.physics.equations import BurgersLaw, ConservationLaw, max_wavespeed
from src.schemes.problems import BurgersProblem, pulse_problem
from src.schemes.scheme1d import BoundaryPair, Grid1D, fill_ghosts
from src.schemes.timeint import IntegrationResult, TimeLoopConfig, integrate
from src.utils.config import ReferenceSettings, get_settings

logger = structlog.get_logger(__name__)

ENO_HALO = 2
SCHEME_TAG = "eno2-lxf-ssprk33"
CACHE_MAGIC = b"EBFREF\n"
CACHE_VERSION = 1


def eno2_reconstruct(window: NDArray) -> tuple[NDArray, NDArray]:
    """Left and right face values of the middle cell of a 3-cell window.

    Args:
        window: Values (u_{k-1}, u_k, u_{k+1}) along axis 0.

    Returns:
        (u_{k-1/2}^+, u_{k+1/2}^-).
    """
    window = np.asarray(window, dtype=np.float64)
    left = window[1] - window[0]
    right = window[2] - window[1]
    slope = np.where(np.abs(right) < np.abs(left), right, left)
    return window[1] - 0.5 * slope, window[1] + 0.5 * slope


def eno2_faces(ext: NDArray) -> tuple[NDArray, NDArray]:
    """Face states at every interface covered by an extended line.

    With L cells in `ext`, returns (u-, u+) at the L - 3 interfaces
    between cells 1..L-2, u- from the left cell and u+ from the right one.
    """
    lower, upper = eno2_reconstruct(np.stack([ext[:-2], ext[1:-1], ext[2:]]))
    return upper[:-1], lower[1:]


def lax_friedrichs(
    u_minus: NDArray, u_plus: NDArray, law: ConservationLaw, speed: float, axis: int = 0
) -> NDArray:
    """Lax-Friedrichs flux with a fixed dissipation speed."""
    return 0.5 * (law.flux(u_minus, axis) + law.flux(u_plus, axis)) - 0.5 * speed * (
        u_plus - u_minus
    )


def eno2_lxf_rhs(
    grid: Grid1D,
    state: NDArray,
    boundary: BoundaryPair,
    t: float,
    law: ConservationLaw | None = None,
) -> NDArray:
    """Semidiscrete time derivative of the ENO2 scheme.

    Raises:
        NonPhysicalStateError: If a state is not admissible.
    """
    law = law or BurgersLaw()
    ext = fill_ghosts(np.asarray(state, dtype=np.float64), boundary, t, ENO_HALO, law)
    u_minus, u_plus = eno2_faces(ext)
    speed = max_wavespeed(ext, law)
    flux = lax_friedrichs(u_minus, u_plus, law, speed)
    return (flux[:-1] - flux[1:]) / grid.dx


def solve_eno2(
    problem: BurgersProblem,
    n: int,
    cfl: float = 0.5,
    t_end: float | None = None,
    checkpoints: tuple[float, ...] = (),
) -> IntegrationResult:
    """Run a Burgers problem with the ENO2 scheme and SSPRK(3,3)."""
    law = BurgersLaw()
    grid = problem.grid(n, ENO_HALO)
    cfg = TimeLoopConfig(
        cfl=cfl, t_end=problem.t_end if t_end is None else t_end, checkpoints=checkpoints
    )
    return integrate(
        lambda u, t: eno2_lxf_rhs(grid, u, problem.boundary, t, law),
        problem.initial_state(grid),
        cfg,
        speed_fn=lambda u: max_wavespeed(u, law),
        spacing=grid.dx,
    )


class ReferenceKey(BaseModel):
    """Identity of a cached reference field; also the file header."""

    model_config = ConfigDict(frozen=True)

    problem: str
    n: int = Field(..., ge=1)
    t_end: float = Field(..., ge=0.0)
    scheme: str = SCHEME_TAG
    version: int = CACHE_VERSION
    n_vars: int = Field(1, ge=1)

    @property
    def filename(self) -> str:
        return f"{self.problem}_n{self.n}_t{self.t_end:g}_{self.scheme}_v{self.version}.ref"


class ReferenceCache:
    """On-disk store of fine-grid reference fields.

    Args:
        cache_dir: Directory holding the cache files.

    Example:
        cache = ReferenceCache(Path("data/reference"))
        field = cache.load(key)
    """

    def __init__(self, cache_dir: Path) -> None:
        self.cache_dir = Path(cache_dir)
        self._log = logger.bind(component="reference_cache", cache_dir=str(self.cache_dir))

    def path_for(self, key: ReferenceKey) -> Path:
        return self.cache_dir / key.filename

    def load(self, key: ReferenceKey) -> NDArray[np.float64] | None:
        """Cached field of shape (n, n_vars), or None on a miss.

        Raises:
            ReadError: If the file exists but is corrupt or belongs to another key.
        """
        path = self.path_for(key)
        if not path.exists():
            self._log.debug("reference_cache_miss", path=str(path))
            return None
        try:
            with path.open("rb") as fh:
                if fh.readline() != CACHE_MAGIC:
                    raise ValueError("bad magic line")
                header = ReferenceKey.model_validate_json(fh.readline())
                payload = fh.read()
        except (OSError, ValueError, ValidationError) as e:
            raise ReadError(
                f"Failed to read reference cache {path}: {e}", details={"path": str(path)}
            ) from e
        if header != key:
            raise ReadError(
                "reference cache header does not match its key",
                details={"path": str(path), "header": header.model_dump()},
            )
        values = np.frombuffer(payload, dtype="<f8")
        if values.size != key.n * key.n_vars:
            raise ReadError(
                "reference cache is truncated",
                details={"path": str(path), "expected": key.n * key.n_vars, "found": values.size},
            )
        self._log.info("reference_cache_hit", path=str(path))
        return values.astype(np.float64).reshape(key.n, key.n_vars)

    def store(self, key: ReferenceKey, values: NDArray) -> Path:
        """Write a field atomically (temporary file, then rename).

        Raises:
            WriteError: If writing fails.
        """
        path = self.path_for(key)
        tmp = path.with_suffix(path.suffix + ".tmp")
        data = np.ascontiguousarray(values, dtype="<f8").reshape(-1)
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            with tmp.open("wb") as fh:
                fh.write(CACHE_MAGIC)
                fh.write(key.model_dump_json().encode() + b"\n")
                fh.write(data.tobytes())
            os.replace(tmp, path)
        except OSError as e:
            tmp.unlink(missing_ok=True)
            raise WriteError(
                f"Failed to write reference cache {path}: {e}", details={"path": str(path)}
            ) from e
        self._log.info("reference_cache_stored", path=str(path), cells=key.n)
        return path

    def export_csv(self, key: ReferenceKey, lower: float, upper: float, target: Path) -> Path:
        """Write a cached field as (x, u) rows.

        Raises:
            ReadError: If the field is not cached.
        """
        values = self.load(key)
        if values is None:
            raise ReadError("no cached reference to export", details={"key": key.model_dump()})
        grid = Grid1D(n=key.n, lower=lower, upper=upper)
        frame = pd.DataFrame({"x": grid.centers, "u": values[:, 0]})
        frame.to_csv(target, index=False)
        return target


def reference_solution(
    problem: BurgersProblem | None = None,
    n_fine: int | None = None,
    settings: ReferenceSettings | None = None,
    cache: ReferenceCache | None = None,
) -> NDArray[np.float64]:
    """Fine-grid ENO2 solution of a problem at its end time, cached on disk.

    Args:
        problem: Problem to solve; defaults to the pulse problem of the settings.
        n_fine: Cell count; defaults to settings.n_fine.
        settings: Reference settings; defaults to the global ones.
        cache: Cache to use; defaults to one under settings.cache_dir.

    Returns:
        Field of shape (n_fine, 1).
    """
    settings = settings or get_settings().reference
    problem = problem or pulse_problem(settings.t_end, settings.domain)
    n = n_fine or settings.n_fine
    cache = cache or ReferenceCache(settings.cache_dir)
    key = ReferenceKey(problem=problem.name, n=n, t_end=problem.t_end)

    cached = cache.load(key)
    if cached is not None:
        return cached

    log = logger.bind(component="reference", problem=problem.name, n=n, t_end=problem.t_end)
    log.info("reference_run_started", cfl=settings.cfl)
    result = solve_eno2(problem, n, cfl=settings.cfl)
    log.info("reference_run_completed", steps=result.steps)
    cache.store(key, result.state)
    return result.state
