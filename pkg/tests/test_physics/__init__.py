"""Tests for src.physics."""
