"""Conservation laws: flux, entropy pair, entropy variables, potential, wavespeed.

Every law works on arrays whose last axis holds the conserved components,
so a Burgers field of N cells has shape (N, 1) and a 2D Euler field of
nx by ny cells has shape (nx, ny, 4). Vector-valued callbacks keep that
trailing axis; scalar callbacks (U, F, psi, wavespeed) drop it.

Burgers and linear advection also accept object arrays of Fraction so
that flux constructions can be checked in exact arithmetic.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from src.exceptions import NonPhysicalStateError
from src.models.states import EulerState


def advection_speed(speed: float | Fraction, u: NDArray | Fraction) -> float | Fraction:
    """speed as a Fraction for exact (object) data, as a float otherwise."""
    if isinstance(u, Fraction) or np.asarray(u).dtype == object:
        return Fraction(speed)
    return float(speed)


class ConservationLaw(ABC):
    """Analytic ingredients of one hyperbolic system.

    Attributes:
        name: Short identifier used in logs and output metadata.
        n_vars: Number of conserved components.
        dim: Number of space dimensions the flux is defined for.
    """

    name: str
    n_vars: int
    dim: int = 1

    @abstractmethod
    def flux(self, u: NDArray, axis: int = 0) -> NDArray:
        """Physical flux f in direction `axis`."""

    @abstractmethod
    def entropy(self, u: NDArray) -> NDArray:
        """Convex entropy U."""

    @abstractmethod
    def entropy_flux(self, u: NDArray, axis: int = 0) -> NDArray:
        """Entropy flux F in direction `axis`."""

    @abstractmethod
    def entropy_variables(self, u: NDArray) -> NDArray:
        """Entropy variables v = dU/du."""

    @abstractmethod
    def potential(self, u: NDArray, axis: int = 0) -> NDArray:
        """Potential psi = v . f - F in direction `axis`."""

    @abstractmethod
    def wavespeed(self, u: NDArray, axis: int = 0) -> NDArray:
        """Per-state largest characteristic speed magnitude in direction `axis`."""

    @abstractmethod
    def mirror(self, u: NDArray, axis: int = 0) -> NDArray:
        """Wall image of `u` with the normal velocity component negated."""

    def check_admissible(self, u: NDArray) -> None:
        """Raise NonPhysicalStateError if any state is outside the admissible set."""
        if u.dtype != object and not np.all(np.isfinite(u)):
            bad = int(np.argwhere(~np.all(np.isfinite(u), axis=-1))[0][0])
            raise NonPhysicalStateError(f"{self.name} state is not finite", cell=bad)


class BurgersLaw(ConservationLaw):
    """Inviscid Burgers equation with the square entropy U = u^2/2."""

    name = "burgers"
    n_vars = 1

    def flux(self, u: NDArray, axis: int = 0) -> NDArray:
        return u * u / 2

    def entropy(self, u: NDArray) -> NDArray:
        return u[..., 0] * u[..., 0] / 2

    def entropy_flux(self, u: NDArray, axis: int = 0) -> NDArray:
        return u[..., 0] ** 3 / 3

    def entropy_variables(self, u: NDArray) -> NDArray:
        return u.copy()

    def potential(self, u: NDArray, axis: int = 0) -> NDArray:
        return u[..., 0] ** 3 / 6

    def wavespeed(self, u: NDArray, axis: int = 0) -> NDArray:
        return np.abs(u[..., 0])

    def mirror(self, u: NDArray, axis: int = 0) -> NDArray:
        return -u


class LinearAdvectionLaw(ConservationLaw):
    """Linear advection f = a u with U = u^2/2.

    Args:
        speed: Advection speed a. Object arrays of Fraction see it as an
            exact Fraction, float arrays as a float.
    """

    name = "advection"
    n_vars = 1

    def __init__(self, speed: float | Fraction = 1.0) -> None:
        self.speed = speed

    def speed_for(self, u: NDArray) -> float | Fraction:
        """Speed in the arithmetic of u."""
        return advection_speed(self.speed, u)

    def flux(self, u: NDArray, axis: int = 0) -> NDArray:
        return self.speed_for(u) * u

    def entropy(self, u: NDArray) -> NDArray:
        return u[..., 0] * u[..., 0] / 2

    def entropy_flux(self, u: NDArray, axis: int = 0) -> NDArray:
        return self.speed_for(u) * u[..., 0] * u[..., 0] / 2

    def entropy_variables(self, u: NDArray) -> NDArray:
        return u.copy()

    def potential(self, u: NDArray, axis: int = 0) -> NDArray:
        return self.speed_for(u) * u[..., 0] * u[..., 0] / 2

    def wavespeed(self, u: NDArray, axis: int = 0) -> NDArray:
        return np.full(u.shape[:-1], abs(float(self.speed)))

    def mirror(self, u: NDArray, axis: int = 0) -> NDArray:
        return -u


class EulerPrimitives(NamedTuple):
    """Primitive fields of a conserved Euler array."""

    rho: NDArray[np.float64]
    velocity: NDArray[np.float64]
    p: NDArray[np.float64]


class EulerLaw(ConservationLaw):
    """Compressible Euler equations of an ideal gas in one or two dimensions.

    Entropy pair U = -rho s/(gamma-1), F_d = v_d U with s = ln p - gamma ln rho.

    Args:
        gamma: Ratio of specific heats.
        dim: Space dimension, 1 or 2.
    """

    name = "euler"

    def __init__(self, gamma: float = 1.4, dim: int = 2) -> None:
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        self.gamma = gamma
        self.dim = dim
        self.n_vars = dim + 2

    def primitives(self, u: NDArray) -> EulerPrimitives:
        """Density, velocity (trailing axis of length dim) and pressure."""
        rho = u[..., 0]
        velocity = u[..., 1 : 1 + self.dim] / rho[..., None]
        kinetic = 0.5 * rho * np.sum(velocity * velocity, axis=-1)
        p = (self.gamma - 1.0) * (u[..., -1] - kinetic)
        return EulerPrimitives(rho, velocity, p)

    def conservative(
        self, rho: NDArray, velocity: NDArray, p: NDArray
    ) -> NDArray[np.float64]:
        """Inverse of primitives()."""
        rho = np.asarray(rho, dtype=np.float64)
        velocity = np.asarray(velocity, dtype=np.float64)
        energy = np.asarray(p) / (self.gamma - 1.0) + 0.5 * rho * np.sum(velocity**2, axis=-1)
        return np.concatenate([rho[..., None], rho[..., None] * velocity, energy[..., None]], axis=-1)

    def check_admissible(self, u: NDArray) -> None:
        rho, _, p = self.primitives(u)
        bad = ~(np.isfinite(rho) & np.isfinite(p) & (rho > 0) & (p > 0))
        if np.any(bad):
            index = np.argwhere(bad)[0]
            raise NonPhysicalStateError(
                "Euler state is not admissible",
                cell=int(index[0]) if index.size == 1 else None,
                details={
                    "index": index.tolist(),
                    "rho": float(rho[tuple(index)]),
                    "p": float(p[tuple(index)]),
                },
            )

    def flux(self, u: NDArray, axis: int = 0) -> NDArray:
        rho, velocity, p = self.primitives(u)
        vd = velocity[..., axis]
        out = u * vd[..., None]
        out[..., 1 + axis] += p
        out[..., -1] += p * vd
        return out

    def specific_entropy(self, u: NDArray) -> NDArray:
        rho, _, p = self.primitives(u)
        return np.log(p) - self.gamma * np.log(rho)

    def entropy(self, u: NDArray) -> NDArray:
        return -u[..., 0] * self.specific_entropy(u) / (self.gamma - 1.0)

    def entropy_flux(self, u: NDArray, axis: int = 0) -> NDArray:
        rho, velocity, _ = self.primitives(u)
        return velocity[..., axis] * self.entropy(u)

    def entropy_variables(self, u: NDArray) -> NDArray:
        rho, velocity, p = self.primitives(u)
        s = np.log(p) - self.gamma * np.log(rho)
        beta = rho / (2.0 * p)
        v = np.empty_like(u, dtype=np.float64)
        v[..., 0] = (self.gamma - s) / (self.gamma - 1.0) - beta * np.sum(velocity**2, axis=-1)
        v[..., 1 : 1 + self.dim] = 2.0 * beta[..., None] * velocity
        v[..., -1] = -2.0 * beta
        return v

    def potential(self, u: NDArray, axis: int = 0) -> NDArray:
        return u[..., 1 + axis].astype(np.float64, copy=True)

    def wavespeed(self, u: NDArray, axis: int = 0) -> NDArray:
        rho, velocity, p = self.primitives(u)
        return np.abs(velocity[..., axis]) + np.sqrt(self.gamma * p / rho)

    def mirror(self, u: NDArray, axis: int = 0) -> NDArray:
        out = np.array(u, dtype=np.float64, copy=True)
        out[..., 1 + axis] = -out[..., 1 + axis]
        return out


class BurgersEntropy(NamedTuple):
    """Entropy ingredients of one Burgers state."""

    U: float
    F: float
    v: float
    psi: float


class EulerEntropy(NamedTuple):
    """Entropy ingredients of one 2D Euler state."""

    U: float
    Fx: float
    Fy: float
    v: NDArray[np.float64]
    psi_x: float
    psi_y: float


def burgers_flux(u: float) -> float:
    """f(u) = u^2/2."""
    return u * u / 2


def burgers_entropy(u: float) -> BurgersEntropy:
    """Square entropy pair of Burgers: U = u^2/2, F = u^3/3, v = u, psi = u^3/6."""
    return BurgersEntropy(U=u * u / 2, F=u**3 / 3, v=u, psi=u**3 / 6)


def euler_flux(state: EulerState, axis: int = 0) -> NDArray[np.float64]:
    """Directional 2D Euler flux of a primitive state.

    Raises:
        NonPhysicalStateError: If rho <= 0 or p <= 0.
    """
    state.require_admissible()
    law = EulerLaw(gamma=state.gamma, dim=2)
    return law.flux(state.to_conservative(dim=2), axis=axis)


def euler_entropy(state: EulerState) -> EulerEntropy:
    """Entropy, entropy fluxes, entropy variables and potentials of a 2D state.

    Raises:
        NonPhysicalStateError: If rho <= 0 or p <= 0.
    """
    state.require_admissible()
    law = EulerLaw(gamma=state.gamma, dim=2)
    u = state.to_conservative(dim=2)
    return EulerEntropy(
        U=float(law.entropy(u)),
        Fx=float(law.entropy_flux(u, 0)),
        Fy=float(law.entropy_flux(u, 1)),
        v=law.entropy_variables(u),
        psi_x=float(law.potential(u, 0)),
        psi_y=float(law.potential(u, 1)),
    )


def max_wavespeed(field: NDArray, law: ConservationLaw, axis: int = 0) -> float:
    """Largest characteristic speed over all cells of `field` in direction `axis`.

    Raises:
        NonPhysicalStateError: If any state is not admissible.
    """
    field = np.asarray(field)
    if field.size == 0:
        return 0.0
    law.check_admissible(field)
    return float(np.max(law.wavespeed(field, axis)))
