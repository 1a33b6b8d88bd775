"""Experiment runner and its outputs."""
