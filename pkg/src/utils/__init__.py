"""Utility modules for Entropy Boundary Fluxes."""

from src.utils.config import (
    Settings,
    clear_settings_cache,
    get_settings,
)
from src.utils.logging import configure_logging

__all__ = [
    "Settings",
    "clear_settings_cache",
    "configure_logging",
    "get_settings",
]
