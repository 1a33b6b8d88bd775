"""Tests for src.fluxes."""
