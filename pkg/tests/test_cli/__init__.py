"""Tests for src.cli."""
