"""Tests for the two-point fluxes."""

from fractions import Fraction

import numpy as np
import pytest

from src.models.states import EulerState
from src.physics.equations import BurgersLaw, EulerLaw, LinearAdvectionLaw
from src.physics.twopoint import (
    ec_euler,
    entropy_condition_residual,
    entropy_conservative_flux,
    entropy_dissipative_flux,
    godunov_burgers,
    log_mean,
    numerical_entropy_flux,
    tadmor_burgers,
)


def euler_states(rng: np.random.Generator, count: int, dim: int = 2) -> np.ndarray:
    """Random admissible Euler states."""
    law = EulerLaw(dim=dim)
    rho = rng.uniform(0.5, 2.0, count)
    velocity = rng.uniform(-1.0, 1.0, (count, dim))
    p = rng.uniform(0.5, 2.0, count)
    return law.conservative(rho, velocity, p)


class TestLogMean:
    """Tests for the logarithmic mean."""

    def test_equal_arguments(self) -> None:
        """Test that the mean of equal values is the value itself."""
        a = np.array([0.5, 1.0, 7.0])
        np.testing.assert_array_equal(log_mean(a, a), a)

    def test_matches_definition(self) -> None:
        """Test (a - b)/(ln a - ln b) away from the series branch."""
        assert log_mean(np.array(1.0), np.array(np.e)) == pytest.approx(np.e - 1.0)

    def test_continuous_across_branch(self) -> None:
        """Test that the series and the closed form agree near the switch."""
        a = 1.0
        b = 1.0 + 0.0199
        exact = (a - b) / np.log(a / b)
        assert log_mean(np.array(a), np.array(b)) == pytest.approx(exact, rel=1e-13)

    def test_symmetric(self) -> None:
        """Test L(a, b) == L(b, a) bitwise."""
        assert log_mean(np.array(2.0), np.array(3.0)) == log_mean(np.array(3.0), np.array(2.0))

    def test_symmetric_on_both_branches(self) -> None:
        """Test bitwise symmetry on far apart and nearly equal pairs."""
        rng = np.random.default_rng(8)
        a = rng.uniform(0.1, 10.0, 200)
        b = np.concatenate([rng.uniform(0.1, 10.0, 100), a[100:] * (1.0 + 1e-4)])
        np.testing.assert_array_equal(log_mean(a, b), log_mean(b, a))


class TestBurgersFluxes:
    """Tests for the Burgers two-point fluxes."""

    def test_tadmor_consistency(self) -> None:
        """Test h(u, u) = f(u)."""
        u = np.array([[1.5]])
        np.testing.assert_allclose(tadmor_burgers(u, u), BurgersLaw().flux(u))

    def test_tadmor_residual_vanishes(self) -> None:
        """Test the entropy conservation condition on random pairs."""
        rng = np.random.default_rng(1)
        u_left = rng.uniform(-3, 3, (200, 1))
        u_right = rng.uniform(-3, 3, (200, 1))
        law = BurgersLaw()
        residual = entropy_condition_residual(
            entropy_conservative_flux(law), law, u_left, u_right
        )
        assert np.max(np.abs(residual)) < 1e-13

    @pytest.mark.parametrize(
        ("u_left", "u_right", "expected"),
        [
            (2.0, 1.0, 2.0),  # right-moving shock
            (-1.0, -2.0, 2.0),  # left-moving shock
            (1.0, -1.0, 0.5),  # stationary shock keeps f(u_L)
            (-1.0, 1.0, 0.0),  # transonic rarefaction
            (1.0, 2.0, 0.5),  # right-moving rarefaction
        ],
    )
    def test_godunov_cases(self, u_left: float, u_right: float, expected: float) -> None:
        """Test the exact Riemann flux in every wave configuration."""
        value = godunov_burgers(np.array([[u_left]]), np.array([[u_right]]))
        assert value[0, 0] == pytest.approx(expected)

    def test_godunov_dissipates_shock(self) -> None:
        """Test a strictly negative residual across a shock."""
        law = BurgersLaw()
        residual = entropy_condition_residual(
            entropy_dissipative_flux(law), law, np.array([[2.0]]), np.array([[-2.0]])
        )
        assert residual[0] < 0.0

    def test_godunov_is_not_symmetric(self) -> None:
        """Test the symmetry tag of the dissipative flux."""
        flux = entropy_dissipative_flux(BurgersLaw())
        assert flux.dissipative
        assert not flux.symmetric


class TestEulerFluxes:
    """Tests for the Euler two-point fluxes."""

    @pytest.mark.parametrize("dim", [1, 2])
    def test_consistency(self, dim: int) -> None:
        """Test h(u, u) = f(u) in both directions."""
        law = EulerLaw(dim=dim)
        u = euler_states(np.random.default_rng(2), 5, dim)
        for axis in range(dim):
            np.testing.assert_allclose(ec_euler(u, u, axis), law.flux(u, axis), rtol=1e-12)

    @pytest.mark.parametrize("dim", [1, 2])
    def test_entropy_conservative(self, dim: int) -> None:
        """Test the EC condition to roundoff on random pairs."""
        rng = np.random.default_rng(3)
        law = EulerLaw(dim=dim)
        flux = entropy_conservative_flux(law)
        u_left = euler_states(rng, 500, dim)
        u_right = euler_states(rng, 500, dim)
        for axis in range(dim):
            residual = entropy_condition_residual(flux, law, u_left, u_right, axis)
            assert np.max(np.abs(residual)) < 1e-11

    def test_symmetric(self) -> None:
        """Test h(a, b) == h(b, a) bitwise."""
        rng = np.random.default_rng(4)
        a = euler_states(rng, 10)
        b = euler_states(rng, 10)
        np.testing.assert_array_equal(ec_euler(a, b, 1), ec_euler(b, a, 1))

    def test_llf_dissipates(self) -> None:
        """Test that LLF never produces entropy on random pairs."""
        rng = np.random.default_rng(5)
        law = EulerLaw(dim=2)
        flux = entropy_dissipative_flux(law)
        residual = entropy_condition_residual(
            flux, law, euler_states(rng, 500), euler_states(rng, 500), axis=0
        )
        assert flux.name == "llf"
        assert np.max(residual) <= 1e-12

    def test_godunov_requires_burgers(self) -> None:
        """Test that Godunov is refused for Euler."""
        with pytest.raises(TypeError):
            entropy_dissipative_flux(EulerLaw(), kind="godunov")


class TestNumericalEntropyFlux:
    """Tests for the numerical entropy flux."""

    def test_consistent_with_entropy_flux(self) -> None:
        """Test H(u, u) = F(u) for Euler."""
        law = EulerLaw(dim=2)
        u = EulerState(rho=1.4, vx=3.0, vy=0.5, p=1.0).to_conservative()[None, :]
        flux = entropy_conservative_flux(law)
        value = numerical_entropy_flux(flux, law, u, u, axis=0)
        np.testing.assert_allclose(value, law.entropy_flux(u, 0), rtol=1e-12)

    def test_accepts_evaluated_flux(self) -> None:
        """Test that a precomputed flux value gives the same H."""
        law = LinearAdvectionLaw(speed=1.0)
        flux = entropy_conservative_flux(law)
        u_left = np.array([[1.0]])
        u_right = np.array([[3.0]])
        direct = numerical_entropy_flux(flux, law, u_left, u_right)
        evaluated = numerical_entropy_flux(flux(u_left, u_right), law, u_left, u_right)
        np.testing.assert_array_equal(direct, evaluated)



class TestAdvectionFlux:
    """Tests for the central advection flux."""

    def test_exact_inputs_stay_exact(self) -> None:
        """Test that a float speed does not leak into Fraction arithmetic."""
        flux = entropy_conservative_flux(LinearAdvectionLaw(speed=1.0))
        u_left = np.array([[Fraction(1, 3)]], dtype=object)
        u_right = np.array([[Fraction(1, 6)]], dtype=object)
        value = flux(u_left, u_right)[0, 0]
        assert isinstance(value, Fraction)
        assert value == Fraction(1, 4)

    def test_float_inputs(self) -> None:
        """Test the float path with a Fraction speed."""
        flux = entropy_conservative_flux(LinearAdvectionLaw(speed=Fraction(2)))
        value = flux(np.array([[1.0]]), np.array([[2.0]]))
        assert value.dtype == np.float64
        assert value[0, 0] == 3.0
