"""Property suites run by the `check` subcommand.

Each check returns a CheckResult; run_checks collects them and logs a
summary. The checks are deterministic (fixed seeds, exact arithmetic where
orders are measured).
"""

from collections.abc import Callable
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
import structlog
from numpy.typing import NDArray

from src.analysis.diagnostics import conservation_check, entropy_residual_field, flux_scale
from src.fluxes.fluxcomb import (
    FluxFamily,
    FluxMatrix,
    boundary_matrices,
    construction_condition_number,
    evaluate_combined_flux,
    interior_matrix,
)
from src.fluxes.published import published_keys, published_matrix
from src.models.reports import CheckResult
from src.physics.equations import BurgersLaw, ConservationLaw, EulerLaw, LinearAdvectionLaw
from src.physics.twopoint import (
    TwoPointFlux,
    entropy_condition_residual,
    entropy_conservative_flux,
    entropy_dissipative_flux,
)
from src.schemes.scheme1d import (
    BoundaryCondition,
    BoundaryPair,
    ConstantAlpha,
    Grid1D,
    SchemeConfig,
)

logger = structlog.get_logger(__name__)

TAYLOR_SPACINGS = tuple(Fraction(1, 2**k) for k in range(4, 10))
TAYLOR_CENTER = Fraction(1, 2)
# sin and cos are replaced by their Taylor polynomials of this degree; on
# the check stencils the truncation stays below 1e-90.
SIN_DEGREE = 61


@lru_cache(maxsize=None)
def taylor_profile(x: Fraction) -> Fraction:
    """sin(x), exact: its Taylor polynomial of degree SIN_DEGREE."""
    x2 = x * x
    total = Fraction(0)
    for k in range(SIN_DEGREE // 2, -1, -1):
        total = total * x2 + Fraction((-1) ** k, factorial(2 * k + 1))
    return total * x


def taylor_profile_derivative(x: Fraction) -> Fraction:
    """Exact derivative of taylor_profile."""
    x2 = x * x
    total = Fraction(0)
    for k in range(SIN_DEGREE // 2, -1, -1):
        total = total * x2 + Fraction((-1) ** k, factorial(2 * k))
    return total


@lru_cache(maxsize=None)
def taylor_target() -> Fraction:
    """d/dx (u^2/2) = u u' at the center cell."""
    return taylor_profile(TAYLOR_CENTER) * taylor_profile_derivative(TAYLOR_CENTER)


def _points(matrix: FluxMatrix, shift: int, dx: Fraction) -> NDArray:
    """Exact profile values over the stencil with offset 0 at cell `shift`."""
    window = np.empty((matrix.size, 1), dtype=object)
    for row, offset in enumerate(matrix.offsets):
        window[row, 0] = taylor_profile(TAYLOR_CENTER + (offset + shift) * dx)
    return window


def flux_difference(
    left: FluxMatrix, right: FluxMatrix, family: FluxFamily, dx: Fraction
) -> Fraction:
    """(f_{1/2} - f_{-1/2}) / dx at the center cell, point values of the profile.

    `left` serves the interface between cells -1 and 0, `right` the one
    between cells 0 and 1.
    """
    f_right = evaluate_combined_flux(right, family, _points(right, 0, dx))[0]
    f_left = evaluate_combined_flux(left, family, _points(left, -1, dx))[0]
    return (f_right - f_left) / dx


def taylor_errors(
    left: FluxMatrix,
    right: FluxMatrix,
    spacings: tuple[Fraction, ...] = TAYLOR_SPACINGS,
) -> list[Fraction]:
    """Exact truncation errors of the flux difference, Burgers with the Tadmor flux."""
    family = FluxFamily(ec=entropy_conservative_flux(BurgersLaw()))
    return [abs(flux_difference(left, right, family, dx) - taylor_target()) for dx in spacings]


def _log_ratio(a: Fraction, b: Fraction) -> float:
    if b == 0:
        return float("inf")
    return float(np.log(float(a / b)))


def taylor_orders(
    left: FluxMatrix,
    right: FluxMatrix,
    spacings: tuple[Fraction, ...] = TAYLOR_SPACINGS,
) -> list[float]:
    """Orders log(e_i / e_{i+1}) / log(dx_i / dx_{i+1}) of consecutive spacings."""
    errors = taylor_errors(left, right, spacings)
    return [
        _log_ratio(errors[i], errors[i + 1]) / _log_ratio(spacings[i], spacings[i + 1])
        for i in range(len(spacings) - 1)
    ]


def taylor_slope(
    left: FluxMatrix,
    right: FluxMatrix,
    spacings: tuple[Fraction, ...] = TAYLOR_SPACINGS,
) -> float:
    """Least-squares order of the truncation error over all `spacings`."""
    errors = np.asarray([float(e) for e in taylor_errors(left, right, spacings)])
    dx = np.asarray([float(h) for h in spacings])
    return float(np.polyfit(np.log(dx), np.log(errors), 1)[0])


def taylor_cell_orders(
    p: int, q: int | None = None, spacings: tuple[Fraction, ...] = TAYLOR_SPACINGS
) -> dict[int, float]:
    """Asymptotic orders of every cell type of the (p, q) family.

    The order of a cell is the one measured over the two finest spacings.
    Index 0 is the interior cell; index s (1..p) the cell between the
    right-family interfaces s-1 and s; -s the mirrored left cell.
    """
    matrices = boundary_matrices(p, q)
    cells = {0: (matrices[0], matrices[0])}
    for s in range(1, p + 1):
        cells[s] = (matrices[s - 1], matrices[s])
        cells[-s] = (matrices[-s], matrices[-(s - 1)])
    return {
        index: taylor_orders(left, right, spacings)[-1]
        for index, (left, right) in sorted(cells.items())
    }


def advection_coefficients(p: int) -> list[Fraction]:
    """Weights of u_l in the interior combined flux of u_t + u_x = 0, central flux."""
    matrix = interior_matrix(p)
    family = FluxFamily(ec=entropy_conservative_flux(LinearAdvectionLaw(Fraction(1))))
    coefficients = []
    for row in range(matrix.size):
        window = np.full((matrix.size, 1), Fraction(0), dtype=object)
        window[row, 0] = Fraction(1)
        coefficients.append(Fraction(evaluate_combined_flux(matrix, family, window)[0]))
    return coefficients


def check_published() -> CheckResult:
    """Constructed matrices equal the published ones entry for entry."""
    mismatched = []
    for p, index in published_keys():
        lowest, rows = published_matrix(p, index)
        built = boundary_matrices(p, 2 * p - 1)[index]
        if built.lowest != lowest or built.entries != rows:
            mismatched.append((p, index))
    return CheckResult(
        name="published_matrices",
        passed=not mismatched,
        value=float(len(mismatched)),
        threshold=0.0,
        detail=f"{len(published_keys())} matrices compared, mismatched: {mismatched}",
    )


def random_states(law: ConservationLaw, count: int, rng: np.random.Generator) -> NDArray:
    """Admissible random states of a law, shape (count, n_vars)."""
    if isinstance(law, EulerLaw):
        rho = rng.uniform(0.5, 2.0, count)
        velocity = rng.uniform(-1.0, 1.0, (count, law.dim))
        p = rng.uniform(0.5, 2.0, count)
        return law.conservative(rho, velocity, p)
    return rng.uniform(-2.0, 2.0, (count, law.n_vars))


def twopoint_residual(
    flux: TwoPointFlux, count: int = 1000, seed: int = 0, axis: int = 0
) -> tuple[float, float]:
    """(max |residual|, max residual) over random pairs, both divided by the scale."""
    rng = np.random.default_rng(seed)
    law = flux.law
    u_left = random_states(law, count, rng)
    u_right = random_states(law, count, rng)
    residual = entropy_condition_residual(flux, law, u_left, u_right, axis)
    scale = max(flux_scale(u_left, law, axis), flux_scale(u_right, law, axis))
    return float(np.max(np.abs(residual))) / scale, float(np.max(residual)) / scale


def _label(law: ConservationLaw) -> str:
    return f"{law.name}{law.dim}d" if isinstance(law, EulerLaw) else law.name


def check_twopoint(count: int = 1000, seed: int = 0) -> list[CheckResult]:
    """EC residuals vanish and dissipative residuals are nonpositive."""
    results = []
    laws: list[ConservationLaw] = [BurgersLaw(), EulerLaw(dim=1), EulerLaw(dim=2)]
    for law in laws:
        ec = entropy_conservative_flux(law)
        worst, _ = twopoint_residual(ec, count, seed)
        results.append(
            CheckResult(
                name=f"ec_residual_{_label(law)}",
                passed=worst <= 1e-11,
                value=worst,
                threshold=1e-11,
                detail=f"{ec.name} over {count} pairs",
            )
        )
        dissipative = entropy_dissipative_flux(law)
        _, largest = twopoint_residual(dissipative, count, seed)
        results.append(
            CheckResult(
                name=f"dissipative_sign_{_label(law)}",
                passed=largest <= 1e-12,
                value=largest,
                threshold=1e-12,
                detail=f"{dissipative.name} over {count} pairs",
            )
        )
    return results


def telescoping_configs(p: int = 3) -> dict[str, SchemeConfig]:
    """Burgers configurations covering every boundary treatment."""
    law = BurgersLaw()
    family = FluxFamily(ec=entropy_conservative_flux(law))

    def inflow(value: float) -> BoundaryCondition:
        state = np.array([value])
        return BoundaryCondition.inflow(lambda t: state)

    boundaries = {
        "periodic": BoundaryPair(),
        "inflow_outflow": BoundaryPair(inflow(1.2), BoundaryCondition.outflow()),
        "inflow_inflow": BoundaryPair(inflow(0.9), inflow(-0.9)),
        "reflective": BoundaryPair(BoundaryCondition.reflective(), BoundaryCondition.reflective()),
    }
    return {
        name: SchemeConfig(law=law, p=p, family=family, boundary=pair)
        for name, pair in boundaries.items()
    }


def check_telescoping(p: int = 3, n: int = 40, seed: int = 0) -> list[CheckResult]:
    """dx sum(rhs) equals the end-flux difference for every boundary treatment."""
    rng = np.random.default_rng(seed)
    grid = Grid1D(n=n, lower=0.0, upper=1.0, halo=p)
    x = grid.centers
    state = (np.sin(2 * np.pi * x) + 0.3 * rng.uniform(-1, 1) * np.cos(6 * np.pi * x)).reshape(-1, 1)
    results = []
    for name, cfg in telescoping_configs(p).items():
        defect = conservation_check(grid, state, cfg) / flux_scale(state, cfg.law)
        results.append(
            CheckResult(
                name=f"telescoping_{name}", passed=defect <= 1e-12, value=defect, threshold=1e-12
            )
        )
    return results


def check_taylor(orders: tuple[tuple[int, int], ...] = ((2, 3), (3, 5))) -> list[CheckResult]:
    """Interior cells reach order 2p and boundary cells order q on sin data."""
    finest = f"dx = 1/{TAYLOR_SPACINGS[-2].denominator}, 1/{TAYLOR_SPACINGS[-1].denominator}"
    results = []
    for p, q in orders:
        for index, slope in taylor_cell_orders(p, q).items():
            expected = 2 * p if index == 0 else q
            results.append(
                CheckResult(
                    name=f"taylor_p{p}_q{q}_cell{index:+d}",
                    passed=slope >= expected - 0.1,
                    value=slope,
                    threshold=expected - 0.1,
                    detail=finest,
                )
            )
    return results


def check_advection_reduction() -> CheckResult:
    """The p=2 interior flux reduces to the fourth-order central stencil."""
    coefficients = advection_coefficients(2)
    expected = [Fraction(-1, 12), Fraction(7, 12), Fraction(7, 12), Fraction(-1, 12)]
    return CheckResult(
        name="advection_reduction_p2",
        passed=coefficients == expected,
        detail=" ".join(str(c) for c in coefficients),
    )


def check_condition_growth(ps: tuple[int, ...] = (2, 3, 4)) -> CheckResult:
    """Construction condition numbers increase with p."""
    numbers = [construction_condition_number(p) for p in ps]
    increasing = all(b > a for a, b in zip(numbers, numbers[1:], strict=False))
    return CheckResult(
        name="condition_growth",
        passed=increasing,
        value=numbers[-1],
        detail=", ".join(f"p={p}: {c:.3e}" for p, c in zip(ps, numbers, strict=True)),
    )


def check_blend_sign(p: int = 2, n: int = 40) -> CheckResult:
    """Blending the dissipative flux at a jump gives r_k <= 0 everywhere."""
    law = BurgersLaw()
    family = FluxFamily(ec=entropy_conservative_flux(law), dissipative=entropy_dissipative_flux(law))
    cfg = SchemeConfig(law=law, p=p, family=family, alpha=ConstantAlpha(1.0))
    grid = Grid1D(n=n, halo=p)
    state = np.where(grid.centers < 0.5, 1.0, -1.0).reshape(-1, 1)
    report = entropy_residual_field(grid, state, cfg)
    return CheckResult(
        name="blend_entropy_sign",
        passed=report.dissipates(),
        value=report.max_positive / report.scale,
        threshold=1e-12,
    )


CHECKS: dict[str, Callable[[], CheckResult | list[CheckResult]]] = {
    "published": check_published,
    "twopoint": check_twopoint,
    "telescoping": check_telescoping,
    "taylor": check_taylor,
    "advection": check_advection_reduction,
    "condition": check_condition_growth,
    "blend": check_blend_sign,
}


def run_checks(names: list[str] | None = None) -> list[CheckResult]:
    """Run the named suites (all by default) and log each outcome.

    Raises:
        KeyError: If a name is unknown.
    """
    log = logger.bind(component="checks")
    results: list[CheckResult] = []
    for name in names or list(CHECKS):
        outcome = CHECKS[name]()
        batch = outcome if isinstance(outcome, list) else [outcome]
        for result in batch:
            log.info("check_finished", check=result.name, passed=result.passed, value=result.value)
        results.extend(batch)
    log.info(
        "checks_completed",
        total=len(results),
        failed=sum(not r.passed for r in results),
    )
    return results
