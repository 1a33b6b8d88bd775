"""Finite-volume schemes, time integration and the reference solver."""

from src.schemes.scheme1d import BoundaryCondition, BoundaryPair, Grid1D, Scheme1D, SchemeConfig
from src.schemes.scheme2d import Grid2D, Scheme2D, build_ffs_grid
from src.schemes.timeint import TimeLoopConfig, integrate

__all__ = [
    "BoundaryCondition",
    "BoundaryPair",
    "Grid1D",
    "Grid2D",
    "Scheme1D",
    "Scheme2D",
    "SchemeConfig",
    "TimeLoopConfig",
    "build_ffs_grid",
    "integrate",
]
