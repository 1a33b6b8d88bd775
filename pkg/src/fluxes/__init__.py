"""Exact construction and evaluation of linear-combined fluxes."""

from src.fluxes.fluxcomb import (
    FluxFamily,
    FluxMatrix,
    boundary_matrices,
    evaluate_combined_flux,
    interior_matrix,
)

__all__ = [
    "FluxFamily",
    "FluxMatrix",
    "boundary_matrices",
    "evaluate_combined_flux",
    "interior_matrix",
]
