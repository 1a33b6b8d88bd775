"""Conservation laws and two-point numerical fluxes."""

from src.physics.equations import (
    BurgersLaw,
    ConservationLaw,
    EulerLaw,
    LinearAdvectionLaw,
    max_wavespeed,
)
from src.physics.twopoint import (
    TwoPointFlux,
    entropy_condition_residual,
    entropy_conservative_flux,
    entropy_dissipative_flux,
)

__all__ = [
    "BurgersLaw",
    "ConservationLaw",
    "EulerLaw",
    "LinearAdvectionLaw",
    "TwoPointFlux",
    "entropy_condition_residual",
    "entropy_conservative_flux",
    "entropy_dissipative_flux",
    "max_wavespeed",
]
