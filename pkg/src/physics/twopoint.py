"""Two-point numerical fluxes and their numerical entropy fluxes.

Entropy conservative fluxes h satisfy <v_R - v_L, h> = psi_R - psi_L;
entropy dissipative fluxes g satisfy the same relation with <=.
All fluxes act on arrays with a trailing component axis and broadcast
over any leading axes.
"""

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from src.physics.equations import (
    BurgersLaw,
    ConservationLaw,
    EulerLaw,
    LinearAdvectionLaw,
    advection_speed,
)

# Below this value of ((a-b)/(a+b))^2 the logarithmic mean uses its series.
LOG_MEAN_SERIES_THRESHOLD = 1e-4

FluxCallback = Callable[[NDArray, NDArray, int], NDArray]


@dataclass(frozen=True)
class TwoPointFlux:
    """A named two-point flux bound to the law it approximates.

    Attributes:
        name: Identifier used in logs and output metadata.
        law: Conservation law whose v and psi define H for this flux.
        evaluate: Callback (u_left, u_right, axis) -> flux.
        symmetric: h(a, b) == h(b, a) for all states.
        dissipative: True for entropy dissipative fluxes.
    """

    name: str
    law: ConservationLaw
    evaluate: FluxCallback
    symmetric: bool = True
    dissipative: bool = False

    def __call__(self, u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
        return self.evaluate(u_left, u_right, axis)


def log_mean(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """Logarithmic mean (a - b)/(ln a - ln b) with a stable near-equal branch.

    For ((a-b)/(a+b))^2 below LOG_MEAN_SERIES_THRESHOLD the four-term series
    of ln(a/b) is used, so log_mean(a, a) == a exactly.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    f = (a - b) / (a + b)
    u = f * f
    series = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0))
    near = u < LOG_MEAN_SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = (a - b) / (np.log(a) - np.log(b))
    return np.where(near, (a + b) / (2.0 * series), exact)


def tadmor_burgers(u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
    """Entropy conservative Burgers flux (uL^2 + uL uR + uR^2)/6."""
    return (u_left * u_left + u_left * u_right + u_right * u_right) / 6


def godunov_burgers(u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
    """Exact Riemann flux of Burgers; a stationary shock returns f(u_L)."""
    f_left = u_left * u_left / 2
    f_right = u_right * u_right / 2
    rarefaction = np.where(
        u_left > 0, f_left, np.where(u_right < 0, f_right, np.zeros_like(f_left))
    )
    shock = np.where(u_left + u_right >= 0, f_left, f_right)
    return np.where(u_left <= u_right, rarefaction, shock)


def ec_euler(u_left: NDArray, u_right: NDArray, axis: int = 0, gamma: float = 1.4) -> NDArray:
    """Kinetic energy preserving, entropy conservative Euler flux.

    Built from logarithmic means of rho and beta = rho/(2p) and arithmetic
    means of the velocities; works for the 1D and 2D layouts.
    """
    dim = u_left.shape[-1] - 2
    law = EulerLaw(gamma=gamma, dim=dim)
    rho_l, vel_l, p_l = law.primitives(u_left)
    rho_r, vel_r, p_r = law.primitives(u_right)
    beta_l = rho_l / (2.0 * p_l)
    beta_r = rho_r / (2.0 * p_r)

    rho_ln = log_mean(rho_l, rho_r)
    beta_ln = log_mean(beta_l, beta_r)
    vel_avg = 0.5 * (vel_l + vel_r)
    p_tilde = 0.5 * (rho_l + rho_r) / (beta_l + beta_r)
    vsq_avg = 0.5 * (np.sum(vel_l * vel_l, axis=-1) + np.sum(vel_r * vel_r, axis=-1))

    out = np.empty(np.broadcast_shapes(u_left.shape, u_right.shape), dtype=np.float64)
    mass = rho_ln * vel_avg[..., axis]
    out[..., 0] = mass
    out[..., 1 : 1 + dim] = mass[..., None] * vel_avg
    out[..., 1 + axis] += p_tilde
    out[..., -1] = mass * (
        1.0 / (2.0 * (gamma - 1.0) * beta_ln) - 0.5 * vsq_avg
    ) + np.sum(vel_avg * out[..., 1 : 1 + dim], axis=-1)
    return out


def llf(
    u_left: NDArray, u_right: NDArray, axis: int, law: ConservationLaw
) -> NDArray:
    """Local Lax-Friedrichs flux with the larger wavespeed of the two states."""
    speed = np.maximum(law.wavespeed(u_left, axis), law.wavespeed(u_right, axis))
    mean = 0.5 * (law.flux(u_left, axis) + law.flux(u_right, axis))
    return mean - 0.5 * speed[..., None] * (u_right - u_left)


def central_advection(speed: float | Fraction) -> FluxCallback:
    """Arithmetic mean a (uL + uR)/2, entropy conservative for linear advection.

    Exact (object) inputs give exact outputs.
    """

    def evaluate(u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
        return advection_speed(speed, u_left) * (u_left + u_right) / 2

    return evaluate


def numerical_entropy_flux(
    flux: TwoPointFlux | NDArray,
    law: ConservationLaw,
    u_left: NDArray,
    u_right: NDArray,
    axis: int = 0,
) -> NDArray:
    """H = 1/2 (v_L + v_R) . h(u_L, u_R) - 1/2 (psi_L + psi_R).

    Args:
        flux: A two-point flux, or an already evaluated flux value.
        law: Law supplying v and psi.
        u_left: Left states.
        u_right: Right states.
        axis: Direction.
    """
    value = flux(u_left, u_right, axis) if isinstance(flux, TwoPointFlux) else flux
    v_sum = law.entropy_variables(u_left) + law.entropy_variables(u_right)
    psi_sum = law.potential(u_left, axis) + law.potential(u_right, axis)
    return np.sum(v_sum * value, axis=-1) / 2 - psi_sum / 2


def entropy_condition_residual(
    flux: TwoPointFlux,
    law: ConservationLaw,
    u_left: NDArray,
    u_right: NDArray,
    axis: int = 0,
) -> NDArray:
    """<v_R - v_L, h(u_L, u_R)> - (psi_R - psi_L): zero for EC, <= 0 for dissipative."""
    value = flux(u_left, u_right, axis)
    v_jump = law.entropy_variables(u_right) - law.entropy_variables(u_left)
    psi_jump = law.potential(u_right, axis) - law.potential(u_left, axis)
    return np.sum(v_jump * value, axis=-1) - psi_jump


def entropy_conservative_flux(law: ConservationLaw) -> TwoPointFlux:
    """Default EC flux of a law."""
    if isinstance(law, BurgersLaw):
        return TwoPointFlux("tadmor", law, tadmor_burgers)
    if isinstance(law, LinearAdvectionLaw):
        return TwoPointFlux("central", law, central_advection(law.speed))
    if isinstance(law, EulerLaw):
        gamma = law.gamma

        def evaluate(u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
            return ec_euler(u_left, u_right, axis, gamma=gamma)

        return TwoPointFlux("ec_euler", law, evaluate)
    raise TypeError(f"No entropy conservative flux for law {law.name!r}")


def entropy_dissipative_flux(law: ConservationLaw, kind: str = "default") -> TwoPointFlux:
    """Dissipative flux of a law: Godunov for Burgers, local Lax-Friedrichs otherwise.

    Args:
        law: Conservation law.
        kind: "godunov", "llf" or "default".
    """
    if kind == "godunov" or (kind == "default" and isinstance(law, BurgersLaw)):
        if not isinstance(law, BurgersLaw):
            raise TypeError("Godunov flux is only available for Burgers")
        return TwoPointFlux("godunov", law, godunov_burgers, symmetric=False, dissipative=True)

    def evaluate(u_left: NDArray, u_right: NDArray, axis: int = 0) -> NDArray:
        return llf(u_left, u_right, axis, law)

    return TwoPointFlux("llf", law, evaluate, symmetric=False, dissipative=True)
