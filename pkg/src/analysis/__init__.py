"""Diagnostics and property suites."""
