"""Tests for the Burgers test problems."""

import numpy as np
import pytest

from src.schemes.problems import (
    PROBLEMS,
    left_wall_state,
    pulse_problem,
    pulse_state,
    right_wall_state,
    sinusoidal_bc_problem,
    smooth_periodic_problem,
)
from src.schemes.scheme1d import BoundaryKind


class TestBoundaryData:
    """Tests for the time-dependent inflow states."""

    @pytest.mark.parametrize(("t", "expected"), [(0.0, 1.0), (1.0, 0.9), (2.0, 0.8)])
    def test_left_wall(self, t: float, expected: float) -> None:
        """Test u_l(t) = 0.9 + cos(pi t / 2) / 10."""
        assert left_wall_state(t)[0] == pytest.approx(expected)
        assert right_wall_state(t)[0] == pytest.approx(-expected)

    def test_pulse_peak(self) -> None:
        """Test the pulse maximum at t = 5 and its decay."""
        assert pulse_state(5.0)[0] == pytest.approx(1.02)
        assert pulse_state(0.0)[0] == pytest.approx(1.0, abs=1e-12)


class TestProblems:
    """Tests for the problem definitions."""

    def test_sinusoidal_bc(self) -> None:
        """Test domain, initial data and inflow on both sides."""
        problem = sinusoidal_bc_problem()
        grid = problem.grid(100, halo=3)
        assert grid.dx == pytest.approx(0.2)
        state = problem.initial_state(grid)
        assert state.shape == (100, 1)
        np.testing.assert_allclose(state[:, 0], np.sin(-np.pi * grid.centers / 20.0))
        assert problem.boundary.left.kind == BoundaryKind.INFLOW
        assert problem.boundary.right.kind == BoundaryKind.INFLOW

    def test_pulse(self) -> None:
        """Test u0 = 1 and the constant right state."""
        problem = pulse_problem(t_end=4.0)
        grid = problem.grid(50, halo=2)
        np.testing.assert_array_equal(problem.initial_state(grid), np.ones((50, 1)))
        assert problem.t_end == 4.0
        assert problem.boundary.right.state is not None
        assert problem.boundary.right.state(3.0)[0] == 1.0

    def test_smooth_periodic(self) -> None:
        """Test that the smooth problem is periodic."""
        problem = smooth_periodic_problem()
        assert problem.boundary.left.kind == BoundaryKind.PERIODIC
        assert problem.t_end < 1.0 / np.pi

    def test_registry(self) -> None:
        """Test that registry keys are the problem names."""
        for name, factory in PROBLEMS.items():
            assert factory().name == name
