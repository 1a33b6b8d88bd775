"""Scalar Burgers test problems: initial data, domain and boundary data.

All states use the (N, 1) layout of the schemes; inflow callbacks return a
length-1 state.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from src.schemes.scheme1d import BoundaryCondition, BoundaryPair, Grid1D

InitialProfile = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class BurgersProblem:
    """A Burgers initial-boundary value problem.

    Attributes:
        name: Identifier used in cache keys and output directories.
        lower: Left end of the domain.
        upper: Right end of the domain.
        t_end: Default end time.
        initial: Map from cell centers to initial values.
        boundary: Boundary conditions at both ends.
    """

    name: str
    lower: float
    upper: float
    t_end: float
    initial: InitialProfile
    boundary: BoundaryPair = field(default_factory=BoundaryPair)

    def grid(self, n: int, halo: int) -> Grid1D:
        return Grid1D(n=n, lower=self.lower, upper=self.upper, halo=halo)

    def initial_state(self, grid: Grid1D) -> NDArray[np.float64]:
        """Cell-center samples of the initial profile, shape (N, 1)."""
        return np.asarray(self.initial(grid.centers), dtype=np.float64).reshape(-1, 1)


def _constant_state(value: float) -> Callable[[float], NDArray]:
    state = np.array([value])
    return lambda t: state


def left_wall_state(t: float) -> NDArray:
    """u_l(t) = 0.9 + cos(pi t / 2) / 10."""
    return np.array([0.9 + math.cos(0.5 * math.pi * t) / 10.0])


def right_wall_state(t: float) -> NDArray:
    """u_r(t) = -0.9 - cos(pi t / 2) / 10."""
    return np.array([-0.9 - math.cos(0.5 * math.pi * t) / 10.0])


def pulse_state(t: float) -> NDArray:
    """u_l(t) = 1 + exp(-(t - 5)^2) / 50."""
    return np.array([1.0 + math.exp(-((t - 5.0) ** 2)) / 50.0])


def sinusoidal_bc_problem(t_end: float = 10.0) -> BurgersProblem:
    """Oscillating inflow on both sides of [-10, 10], u0(x) = sin(-pi x / 20)."""
    return BurgersProblem(
        name="burgers-bc",
        lower=-10.0,
        upper=10.0,
        t_end=t_end,
        initial=lambda x: np.sin(-np.pi * x / 20.0),
        boundary=BoundaryPair(
            BoundaryCondition.inflow(left_wall_state),
            BoundaryCondition.inflow(right_wall_state),
        ),
    )


def pulse_problem(t_end: float = 10.0, domain: tuple[float, float] = (0.0, 10.0)) -> BurgersProblem:
    """Gaussian pulse fed in from the left into u0 = 1; u_r = 1."""
    return BurgersProblem(
        name="pulse",
        lower=domain[0],
        upper=domain[1],
        t_end=t_end,
        initial=np.ones_like,
        boundary=BoundaryPair(
            BoundaryCondition.inflow(pulse_state),
            BoundaryCondition.inflow(_constant_state(1.0)),
        ),
    )


def smooth_periodic_problem(t_end: float = 0.15) -> BurgersProblem:
    """u0 = 1 + sin(2 pi x) / 2 on the periodic unit interval.

    The solution stays smooth until t = 1/pi.
    """
    return BurgersProblem(
        name="smooth-periodic",
        lower=0.0,
        upper=1.0,
        t_end=t_end,
        initial=lambda x: 1.0 + 0.5 * np.sin(2.0 * np.pi * x),
    )


PROBLEMS: dict[str, Callable[..., BurgersProblem]] = {
    "burgers-bc": sinusoidal_bc_problem,
    "pulse": pulse_problem,
    "smooth-periodic": smooth_periodic_problem,
}
