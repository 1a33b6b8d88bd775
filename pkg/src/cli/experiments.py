"""Experiment drivers behind the CLI subcommands.

Each `simulate_*`/`*_table` function only computes; the matching `cmd_*`
function runs it for a RunConfig and writes tables, plots and a manifest
into the experiment directory.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from src.analysis.checks import run_checks
from src.analysis.diagnostics import entropy_residual_field, eoc, error_norms
from src.cli import plotting
from src.cli.writers import OutputWriter
from src.exceptions import ConfigurationError, NumericalError
from src.fluxes.fluxcomb import boundary_matrices, construction_condition_numbers
from src.models.reports import CheckResult, ConvergenceRow, ConvergenceTable, EntropyReport
from src.models.run import RunConfig
from src.physics.equations import BurgersLaw, ConservationLaw, EulerLaw
from src.schemes.problems import BurgersProblem, pulse_problem, sinusoidal_bc_problem
from src.schemes.reference import reference_solution
from src.schemes.scheme1d import BoundaryPair, Scheme1D, SchemeConfig
from src.schemes.scheme2d import (
    FFS_INFLOW,
    Grid2D,
    Scheme2D,
    build_ffs_grid,
    inflow_outflow_boundary,
    uniform_field,
)
from src.schemes.timeint import TimeLoopConfig, integrate
from src.utils.config import Settings

logger = structlog.get_logger(__name__)

# oscillating-inflow Burgers run
BURGERS_BC_P = 3
BURGERS_BC_N = 100
BURGERS_BC_CFL = 0.25
BURGERS_BC_T_END = 10.0

# forward-facing step run
FFS_P = 2
FFS_NY = 80
FFS_CFL = 0.3
FFS_T_END = 3.0

CONVERGENCE_BASE_CFL = 0.5
CONVERGENCE_BASE_N = 64


def convergence_sizes(count: int = 8, n_min: int = 64, n_max: int = 256) -> list[int]:
    """Exponentially spaced even grid sizes from n_min to n_max inclusive."""
    ratio = np.log2(n_max / n_min) / (count - 1)
    return [int(2 * round(n_min * 2 ** (i * ratio) / 2)) for i in range(count)]


def convergence_cfl(n: int, base: float = CONVERGENCE_BASE_CFL) -> float:
    """lambda = base * 64 / N."""
    return base * CONVERGENCE_BASE_N / n


def integer_times(t_end: float) -> tuple[float, ...]:
    """0, 1, ..., floor(t_end), and t_end itself."""
    return tuple(sorted({float(t) for t in range(int(np.floor(t_end)) + 1)} | {float(t_end)}))


def build_law(name: str | None, gamma: float = 1.4) -> ConservationLaw:
    """Conservation law named by a run; `euler` is the 2D system."""
    if name == "burgers":
        return BurgersLaw()
    if name == "euler":
        return EulerLaw(gamma=gamma, dim=2)
    raise ConfigurationError(f"no conservation law named {name!r}", field="law")


def scheme_config(
    law: ConservationLaw,
    run: RunConfig,
    settings: Settings,
    default_p: int,
    boundary: BoundaryPair,
    default_alpha: str = "constant",
) -> SchemeConfig:
    """Spatial discretization of a run; blending is on for jump sensing or alpha > 0."""
    scheme = run.scheme_settings(default_p, default_alpha, gamma=settings.scheme.gamma)
    dissipative = run.dissipative or scheme.alpha_kind == "jump" or scheme.alpha_const > 0
    return SchemeConfig.from_settings(law, scheme, boundary=boundary, dissipative=dissipative)


@dataclass
class LineRun:
    """Snapshots and entropy diagnostics of a 1D run."""

    problem: BurgersProblem
    x: NDArray
    snapshots: dict[float, NDArray]
    entropy: list[EntropyReport] = field(default_factory=list)
    steps: int = 0


def simulate_line(
    problem: BurgersProblem,
    cfg: SchemeConfig,
    n: int,
    cfl: float,
    t_end: float,
    checkpoints: tuple[float, ...] = (),
    with_entropy: bool = False,
) -> LineRun:
    """Run a Burgers problem with the combined-flux scheme and SSPRK(3,3)."""
    grid = problem.grid(n, halo=cfg.p)
    scheme = Scheme1D(grid, cfg)
    result = integrate(
        scheme.rhs,
        problem.initial_state(grid),
        TimeLoopConfig(cfl=cfl, t_end=t_end, checkpoints=checkpoints),
        speed_fn=scheme.wavespeed,
        spacing=grid.dx,
    )
    snapshots = result.snapshots
    reports = (
        [entropy_residual_field(grid, u, cfg, t) for t, u in sorted(snapshots.items())]
        if with_entropy
        else []
    )
    return LineRun(problem, grid.centers, snapshots, reports, result.steps)


def simulate_burgers_bc(run: RunConfig, settings: Settings) -> LineRun:
    """The oscillating-inflow Burgers problem, sampled at integer times."""
    t_end = run.t_end if run.t_end is not None else BURGERS_BC_T_END
    problem = sinusoidal_bc_problem(t_end)
    law = build_law(run.law, settings.scheme.gamma)
    cfg = scheme_config(law, run, settings, BURGERS_BC_P, problem.boundary)
    return simulate_line(
        problem,
        cfg,
        n=run.n[0] if run.n else BURGERS_BC_N,
        cfl=run.cfl or BURGERS_BC_CFL,
        t_end=t_end,
        checkpoints=integer_times(t_end),
        with_entropy=True,
    )


def _convergence_row(
    n: int,
    p: int,
    q: int | None,
    law_name: str | None,
    cfl: float,
    t_end: float,
    domain: tuple[float, float],
    reference: NDArray,
    directory: str | None,
) -> ConvergenceRow:
    """One grid of a convergence sweep; module level so worker processes can run it."""
    problem = pulse_problem(t_end, domain)
    cfg = SchemeConfig.from_settings(
        build_law(law_name),
        RunConfig(subcommand="converge", p=p, q=q, law=law_name).scheme_settings(p),
        boundary=problem.boundary,
    )
    line = simulate_line(problem, cfg, n, cfl, t_end)
    state = line.snapshots[max(line.snapshots)]
    norms = error_norms(state, reference, problem.upper - problem.lower, strict=False)
    if directory is not None:
        OutputWriter(Path(directory)).write_line_snapshots(line.x, {t_end: state}, "solution")
    logger.info("convergence_grid_done", n=n, l1=norms.l1, steps=line.steps)
    return ConvergenceRow(n=n, l1=norms.l1, l2=norms.l2, linf=norms.linf)


def convergence_table(
    run: RunConfig,
    settings: Settings,
    reference: NDArray | None = None,
    run_directory: Path | None = None,
) -> ConvergenceTable:
    """Errors of the pulse problem against the ENO2 reference over a grid sweep.

    Args:
        run: p, q, grid sizes (default: 8 sizes in [64, 256]), base CFL, jobs.
        settings: Reference settings supply the domain, end time and fine grid.
        reference: Precomputed fine field; computed or loaded from cache otherwise.
        run_directory: If set, each grid writes its solution to run_directory/N<n>.
    """
    ref = settings.reference
    t_end = run.t_end if run.t_end is not None else ref.t_end
    p = run.resolved_p(settings.scheme.p)
    sizes = list(run.n) or convergence_sizes()
    base_cfl = run.cfl or CONVERGENCE_BASE_CFL
    if reference is None:
        reference = reference_solution(pulse_problem(t_end, ref.domain), ref.n_fine, ref)

    def args(n: int) -> tuple[Any, ...]:
        directory = str(run_directory / f"N{n}") if run_directory is not None else None
        return (
            n,
            p,
            run.q,
            run.law,
            convergence_cfl(n, base_cfl),
            t_end,
            ref.domain,
            reference,
            directory,
        )

    log = logger.bind(component="convergence", p=p, q=run.q, sizes=sizes)
    log.info("convergence_started", jobs=run.jobs)
    if run.jobs > 1:
        with ProcessPoolExecutor(max_workers=run.jobs) as pool:
            futures = [pool.submit(_convergence_row, *args(n)) for n in sizes]
            rows = [future.result() for future in futures]
    else:
        rows = [_convergence_row(*args(n)) for n in sizes]

    table = ConvergenceTable(
        rows=sorted(rows, key=lambda row: row.n),
        p=p,
        q=run.q if run.q is not None else 2 * p - 1,
        metadata={
            "problem": "pulse",
            "law": run.law,
            "t_end": t_end,
            "n_reference": len(reference),
            "grid_rule": "N_i = even round of 64 * 2^(i/3.5)",
            "cfl_rule": f"{base_cfl} * 64 / N",
        },
    )
    log.info("convergence_completed", slope_l1=eoc(table).slope if len(rows) > 1 else None)
    return table


def convergence_frame(table: ConvergenceTable) -> pd.DataFrame:
    """Error table with pairwise orders per norm (first row empty)."""
    frame = table.to_dataframe()
    if len(table.rows) > 1:
        for norm in ("l1", "l2", "linf"):
            frame[f"eoc_{norm}"] = [np.nan, *eoc(table, norm).pairwise]
    return frame


@dataclass
class StepRun:
    """Snapshots of a forward-facing-step run."""

    grid: Grid2D
    law: EulerLaw
    snapshots: dict[float, NDArray]
    steps: int

    def summary(self) -> dict[str, float]:
        """Positivity and bow-shock indicators of the final state."""
        final = self.snapshots[max(self.snapshots)]
        rho, _, p = self.law.primitives(final[self.grid.fluid])
        upstream = final[self.grid.x_centers < 0.6][..., 0]
        return {
            "t": max(self.snapshots),
            "steps": self.steps,
            "min_rho": float(np.min(rho)),
            "min_p": float(np.min(p)),
            "max_rho_upstream": float(np.max(upstream)),
        }


def simulate_ffs(run: RunConfig, settings: Settings) -> StepRun:
    """Mach 3 flow over the forward-facing step, jump-sensor dissipation by default."""
    law = build_law(run.law, settings.scheme.gamma)
    if not isinstance(law, EulerLaw):
        raise ConfigurationError("the step problem needs the euler law", field="law")
    p = run.resolved_p(FFS_P)
    ny = run.n[0] if run.n else FFS_NY
    t_end = run.t_end if run.t_end is not None else FFS_T_END
    inflow = FFS_INFLOW.model_copy(update={"gamma": law.gamma})
    grid = build_ffs_grid(ny, halo=max(p, 2))
    cfg = scheme_config(
        law, run, settings, p, inflow_outflow_boundary(inflow), default_alpha="jump"
    )
    scheme = Scheme2D(grid, cfg)
    result = integrate(
        scheme.rhs,
        uniform_field(grid, inflow),
        TimeLoopConfig(
            cfl=run.cfl or FFS_CFL, t_end=t_end, checkpoints=integer_times(t_end)
        ),
        speed_fn=scheme.speeds,
        spacing=scheme.spacing,
    )
    return StepRun(grid, law, result.snapshots, result.steps)


def _writer(run: RunConfig, settings: Settings) -> OutputWriter:
    base = run.out or settings.output.base_path
    return OutputWriter(base / run.subcommand, run.table_format or settings.output.table_format)


def _svg(run: RunConfig, settings: Settings) -> bool:
    return run.svg or settings.output.svg


def cmd_matrices(run: RunConfig, settings: Settings) -> dict[str, Any]:
    """Write every matrix of the (p, q) family and the construction condition numbers."""
    p = run.resolved_p(settings.scheme.p)
    q = run.q if run.q is not None else 2 * p - 1
    writer = _writer(run, settings)
    matrices = boundary_matrices(p, q)
    for index in sorted(matrices):
        writer.write_matrix(matrices[index], latex=run.latex)
    numbers = construction_condition_numbers(p, q)
    writer.write_table(
        pd.DataFrame({"step": range(1, len(numbers) + 1), "condition": numbers}), "condition"
    )
    summary = {"p": p, "q": q, "matrices": len(matrices), "max_condition": max(numbers)}
    writer.write_manifest(run, summary)
    logger.info("matrices_exported", **summary)
    return summary


def cmd_burgers_bc(run: RunConfig, settings: Settings) -> dict[str, Any]:
    """Snapshots and the entropy-residual series of the oscillating-inflow problem."""
    line = simulate_burgers_bc(run, settings)
    writer = _writer(run, settings)
    writer.write_line_snapshots(line.x, line.snapshots, "snapshots")
    series = pd.DataFrame([report.to_flat_dict() for report in line.entropy])
    writer.write_table(series, "entropy")
    worst = max((r.max_abs / r.scale for r in line.entropy), default=0.0)
    summary = {"steps": line.steps, "max_scaled_entropy_residual": worst}
    if _svg(run, settings):
        plotting.plot_profiles(line.x, line.snapshots, writer.directory / "snapshots.svg")
        plotting.plot_series(
            series["t"].to_numpy(),
            series["max_abs_residual"].to_numpy(),
            writer.directory / "entropy.svg",
            ylabel="max |r_k|",
        )
    writer.write_manifest(run, summary)
    return summary


def cmd_converge(run: RunConfig, settings: Settings) -> dict[str, Any]:
    """Convergence table of the pulse problem with orders and an optional log-log plot."""
    writer = _writer(run, settings)
    table = convergence_table(run, settings, run_directory=writer.directory)
    writer.write_table(convergence_frame(table), "convergence", table.metadata)
    summary: dict[str, Any] = {**table.metadata, "p": table.p, "q": table.q}
    if len(table.rows) > 1:
        summary.update({f"eoc_{norm}": eoc(table, norm).slope for norm in ("l1", "l2", "linf")})
    if _svg(run, settings):
        plotting.plot_convergence({f"p={table.p}": table}, writer.directory / "convergence.svg")
    writer.write_manifest(run, summary)
    return summary


def cmd_ffs(run: RunConfig, settings: Settings) -> dict[str, Any]:
    """Density and pressure fields of the step run at integer times.

    Raises:
        NumericalError: If the final state is not admissible.
    """
    result = simulate_ffs(run, settings)
    writer = _writer(run, settings)
    for t, field_ in sorted(result.snapshots.items()):
        writer.write_field(result.grid, field_, result.law, t, f"field_t{t:g}")
    final_t = max(result.snapshots)
    if _svg(run, settings):
        rho, _, p = result.law.primitives(result.snapshots[final_t])
        plotting.plot_contour(result.grid, rho, writer.directory / "density.svg", "density")
        plotting.plot_contour(result.grid, p, writer.directory / "pressure.svg", "pressure")
    summary = result.summary()
    writer.write_manifest(run, summary)
    if summary["min_rho"] <= 0 or summary["min_p"] <= 0:
        raise NumericalError("step run ended with a non-physical state", details=summary)
    return summary


def cmd_check(run: RunConfig, settings: Settings) -> list[CheckResult]:
    """Run all property suites and write their report."""
    results = run_checks()
    writer = _writer(run, settings)
    writer.write_table(pd.DataFrame([r.model_dump() for r in results]), "checks")
    writer.write_manifest(run, {"failed": sum(not r.passed for r in results)})
    return results
