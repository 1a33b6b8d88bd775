"""Shared pytest fixtures for testing Entropy Boundary Fluxes."""

from pathlib import Path

import numpy as np
import pytest

from src.fluxes.fluxcomb import FluxFamily
from src.physics.equations import BurgersLaw, EulerLaw
from src.physics.twopoint import entropy_conservative_flux, entropy_dissipative_flux
from src.schemes.scheme1d import BoundaryCondition, BoundaryPair, SchemeConfig
from src.utils.config import (
    OutputSettings,
    ReferenceSettings,
    Settings,
    clear_settings_cache,
)


@pytest.fixture(autouse=True)
def reset_settings() -> None:
    """Clear settings cache before each test."""
    clear_settings_cache()


@pytest.fixture
def temp_settings(tmp_path: Path) -> Settings:
    """Settings writing results and reference caches under tmp_path."""
    return Settings(
        output=OutputSettings(base_path=tmp_path / "results"),
        reference=ReferenceSettings(cache_dir=tmp_path / "reference", n_fine=512, t_end=1.0),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized properties."""
    return np.random.default_rng(12345)


@pytest.fixture
def burgers_ec_config() -> SchemeConfig:
    """p=3 entropy conservative Burgers scheme with inflow data on both sides."""
    law = BurgersLaw()
    return SchemeConfig(
        law=law,
        p=3,
        family=FluxFamily(ec=entropy_conservative_flux(law)),
        boundary=BoundaryPair(
            BoundaryCondition.inflow(lambda t: np.array([0.8])),
            BoundaryCondition.inflow(lambda t: np.array([-0.6])),
        ),
    )


@pytest.fixture
def burgers_periodic_config() -> SchemeConfig:
    """p=2 entropy conservative Burgers scheme on a periodic line."""
    law = BurgersLaw()
    return SchemeConfig(law=law, p=2, family=FluxFamily(ec=entropy_conservative_flux(law)))


@pytest.fixture
def euler_family() -> FluxFamily:
    """EC Euler flux blended with local Lax-Friedrichs."""
    law = EulerLaw(dim=2)
    return FluxFamily(ec=entropy_conservative_flux(law), dissipative=entropy_dissipative_flux(law))
