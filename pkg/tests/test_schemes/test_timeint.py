"""Tests for SSPRK(3,3) and the CFL time loop."""

import numpy as np
import pytest

from src.exceptions import NonPhysicalStateError, NumericalError, ZeroWavespeedError
from src.schemes.timeint import TimeLoopConfig, cfl_dt, integrate, ssprk33_step


def decay(u: np.ndarray, t: float) -> np.ndarray:
    """u' = -u."""
    return -u


class TestSsprk33:
    """Tests for the single step."""

    def test_cubic_taylor_polynomial(self) -> None:
        """Test that one step on u' = -u reproduces the third-order Taylor polynomial."""
        dt = 0.1
        value = ssprk33_step(decay, np.array([1.0]), 0.0, dt)[0]
        assert value == pytest.approx(1.0 - dt + dt**2 / 2 - dt**3 / 6, rel=1e-14)

    def test_third_order(self) -> None:
        """Test the global order on u' = -u."""
        errors = []
        for dt in (0.1, 0.05):
            result = integrate(decay, np.array([1.0]), TimeLoopConfig(t_end=1.0, dt=dt))
            errors.append(abs(result.state[0] - np.exp(-1.0)))
        assert np.log2(errors[0] / errors[1]) > 2.8

    def test_time_dependent_rhs(self) -> None:
        """Test u' = t^2 is integrated exactly."""
        result = integrate(
            lambda u, t: np.full_like(u, t**2), np.zeros(1), TimeLoopConfig(t_end=1.0, dt=0.25)
        )
        assert result.state[0] == pytest.approx(1.0 / 3.0, rel=1e-14)


class TestCflDt:
    """Tests for the CFL step rule."""

    def test_one_dimensional(self) -> None:
        """Test lambda dx / s."""
        assert cfl_dt(2.0, 0.1, 0.5) == pytest.approx(0.025)

    def test_two_dimensional(self) -> None:
        """Test lambda / (s_x/dx + s_y/dy)."""
        assert cfl_dt((4.0, 4.0), (0.1, 0.1), 0.3) == pytest.approx(0.3 / 80.0)

    def test_capped_by_remaining(self) -> None:
        """Test that the step never passes the next stop."""
        assert cfl_dt(1.0, 1.0, 0.5, remaining=0.1) == 0.1

    def test_zero_speed(self) -> None:
        """Test zero speed with and without a cap."""
        with pytest.raises(ZeroWavespeedError):
            cfl_dt(0.0, 0.1, 0.5)
        assert cfl_dt(0.0, 0.1, 0.5, remaining=0.2) == 0.2


class TestIntegrate:
    """Tests for the time loop."""

    def test_lands_on_checkpoints(self) -> None:
        """Test exact stops at checkpoints and t_end."""
        cfg = TimeLoopConfig(cfl=0.5, t_end=1.0, checkpoints=(0.3, 0.7, 2.0))
        result = integrate(decay, np.ones(3), cfg, speed_fn=lambda u: 1.0, spacing=0.1)
        assert sorted(result.snapshots) == [0.0, 0.3, 0.7, 1.0]
        assert result.t == 1.0
        np.testing.assert_allclose(result.snapshots[0.3], np.exp(-0.3), rtol=1e-4)

    def test_initial_state_always_recorded(self) -> None:
        """Test the t = 0 snapshot without checkpoints, unaffected by the run."""
        state0 = np.array([2.0, 3.0])
        result = integrate(decay, state0, TimeLoopConfig(t_end=0.5, dt=0.1))
        assert sorted(result.snapshots) == [0.0, 0.5]
        np.testing.assert_array_equal(result.snapshots[0.0], state0)
        assert result.snapshots[0.0] is not state0

    def test_hooks_see_every_step(self) -> None:
        """Test that hooks run once per accepted step."""
        seen: list[tuple[int, float]] = []
        result = integrate(
            decay,
            np.ones(1),
            TimeLoopConfig(t_end=1.0, dt=0.3),
            hooks=[lambda step, t, u: seen.append((step, t))],
        )
        assert result.steps == 4
        assert [step for step, _ in seen] == [1, 2, 3, 4]
        assert seen[-1][1] == 1.0

    def test_initial_state_untouched(self) -> None:
        """Test that the loop works on a copy."""
        state = np.ones(2)
        integrate(decay, state, TimeLoopConfig(t_end=0.5, dt=0.1))
        np.testing.assert_array_equal(state, np.ones(2))

    def test_step_limit(self) -> None:
        """Test the safety cap."""
        with pytest.raises(NumericalError):
            integrate(decay, np.ones(1), TimeLoopConfig(t_end=1.0, dt=0.1, max_steps=3))

    def test_step_limit_reached_on_last_step(self) -> None:
        """Test that finishing on the last allowed step is not an error."""
        result = integrate(decay, np.ones(1), TimeLoopConfig(t_end=1.0, dt=0.5, max_steps=2))
        assert result.steps == 2

    def test_needs_speed_without_dt(self) -> None:
        """Test that the CFL rule requires a wavespeed."""
        with pytest.raises(ValueError):
            integrate(decay, np.ones(1), TimeLoopConfig(t_end=1.0))

    def test_non_physical_state_carries_step(self) -> None:
        """Test that inadmissible states are re-raised with step and time."""

        def failing(u: np.ndarray, t: float) -> np.ndarray:
            if t > 0.25:
                raise NonPhysicalStateError("negative density", cell=3)
            return -u

        with pytest.raises(NonPhysicalStateError) as excinfo:
            integrate(failing, np.ones(1), TimeLoopConfig(t_end=1.0, dt=0.2))
        assert excinfo.value.step == 1
        assert excinfo.value.time == pytest.approx(0.2)
        assert excinfo.value.cell == 3

    def test_non_finite_state(self) -> None:
        """Test that overflow to inf is reported."""
        with pytest.raises(NonPhysicalStateError):
            integrate(lambda u, t: u * 1e300, np.ones(1), TimeLoopConfig(t_end=1.0, dt=1.0))
