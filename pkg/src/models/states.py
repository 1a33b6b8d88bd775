"""Pydantic model for primitive Euler gas states.

Conserved fields used by the schemes are plain numpy arrays with a trailing
component axis; EulerState is the validated, human-facing form used for
configuration, initial data and tests.

Component layout of a conserved vector:
- 1D: (rho, rho*vx, E)
- 2D: (rho, rho*vx, rho*vy, E)
"""

import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.exceptions import NonPhysicalStateError


class EulerState(BaseModel):
    """Primitive state of an ideal gas.

    Attributes:
        rho: Density.
        vx: Velocity in x.
        vy: Velocity in y (ignored for 1D conversions).
        p: Pressure.
        gamma: Ratio of specific heats.
    """

    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., description="Density")
    vx: float = Field(0.0, description="Velocity in x")
    vy: float = Field(0.0, description="Velocity in y")
    p: float = Field(..., description="Pressure")
    gamma: float = Field(1.4, gt=1.0, description="Ratio of specific heats")

    @property
    def is_admissible(self) -> bool:
        """Positive, finite density and pressure."""
        return (
            math.isfinite(self.rho) and math.isfinite(self.p) and self.rho > 0 and self.p > 0
        )

    @property
    def energy(self) -> float:
        """Total energy per unit volume."""
        return self.p / (self.gamma - 1.0) + 0.5 * self.rho * (self.vx**2 + self.vy**2)

    @property
    def sound_speed(self) -> float:
        """Speed of sound sqrt(gamma p / rho)."""
        self.require_admissible()
        return math.sqrt(self.gamma * self.p / self.rho)

    @property
    def specific_entropy(self) -> float:
        """s = ln p - gamma ln rho."""
        self.require_admissible()
        return math.log(self.p) - self.gamma * math.log(self.rho)

    def require_admissible(self) -> None:
        """Raise NonPhysicalStateError for rho <= 0 or p <= 0."""
        if not self.is_admissible:
            raise NonPhysicalStateError(
                "Euler state is not admissible",
                details={"rho": self.rho, "p": self.p},
            )

    def to_conservative(self, dim: int = 2) -> NDArray[np.float64]:
        """Conserved vector in the 1D or 2D layout."""
        if dim == 1:
            return np.array([self.rho, self.rho * self.vx, self.energy])
        return np.array([self.rho, self.rho * self.vx, self.rho * self.vy, self.energy])

    def mirrored(self, axis: int) -> "EulerState":
        """State with the velocity normal to a wall across `axis` negated."""
        if axis == 0:
            return self.model_copy(update={"vx": -self.vx})
        return self.model_copy(update={"vy": -self.vy})

    @classmethod
    def from_conservative(cls, u: NDArray[np.float64], gamma: float = 1.4) -> "EulerState":
        """Build a primitive state from a 1D or 2D conserved vector."""
        u = np.asarray(u, dtype=np.float64)
        rho = float(u[0])
        if u.shape[-1] == 3:
            vx, vy, energy = float(u[1]) / rho, 0.0, float(u[2])
        else:
            vx, vy, energy = float(u[1]) / rho, float(u[2]) / rho, float(u[3])
        p = (gamma - 1.0) * (energy - 0.5 * rho * (vx**2 + vy**2))
        return cls(rho=rho, vx=vx, vy=vy, p=p, gamma=gamma)
