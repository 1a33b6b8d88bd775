"""Tests for src.schemes."""
