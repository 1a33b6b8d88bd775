"""Tests for src.models."""
