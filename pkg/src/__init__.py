"""Entropy Boundary Fluxes - high-order entropy conservative fluxes with boundary-aware stencils.

This package provides exact-rational construction of linear-combined two-point
fluxes, finite-volume schemes for Burgers and Euler built on them, and the
experiment runner that exercises them.
"""

__version__ = "0.1.0"

from src.exceptions import EBFError
from src.utils.config import Settings, get_settings

__all__ = [
    "EBFError",
    "Settings",
    "get_settings",
    "__version__",
]
