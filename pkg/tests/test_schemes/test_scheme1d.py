"""Tests for the 1D finite-volume scheme."""

import numpy as np
import pytest

from src.exceptions import ConfigurationError, GridTooSmallError, NonPhysicalStateError
from src.fluxes.fluxcomb import FluxFamily, boundary_matrices
from src.physics.equations import BurgersLaw, EulerLaw, LinearAdvectionLaw
from src.physics.twopoint import entropy_conservative_flux
from src.schemes.scheme1d import (
    BoundaryCondition,
    BoundaryKind,
    BoundaryPair,
    ConstantAlpha,
    Grid1D,
    JumpSensorAlpha,
    Scheme1D,
    SchemeConfig,
    alpha_provider,
    fill_ghosts,
    interface_fluxes,
    interface_matrix,
    rhs,
)
from src.utils.config import SchemeSettings


def advection_config(p: int) -> SchemeConfig:
    """Periodic linear advection with unit speed."""
    law = LinearAdvectionLaw(speed=1.0)
    return SchemeConfig(law=law, p=p, family=FluxFamily(ec=entropy_conservative_flux(law)))


class TestGrid1D:
    """Tests for Grid1D."""

    def test_geometry(self) -> None:
        """Test dx and cell centers."""
        grid = Grid1D(n=4, lower=-1.0, upper=1.0)
        assert grid.dx == 0.5
        assert grid.length == 2.0
        np.testing.assert_allclose(grid.centers, [-0.75, -0.25, 0.25, 0.75])

    def test_empty_domain(self) -> None:
        """Test that upper <= lower is rejected."""
        with pytest.raises(ValueError):
            Grid1D(n=4, lower=1.0, upper=1.0)


class TestBoundaryConditions:
    """Tests for boundary condition objects."""

    def test_inflow_needs_state(self) -> None:
        """Test that inflow without data is rejected."""
        with pytest.raises(ConfigurationError):
            BoundaryCondition(BoundaryKind.INFLOW)

    def test_periodic_on_one_side(self) -> None:
        """Test that periodicity must be two-sided."""
        with pytest.raises(ConfigurationError) as excinfo:
            BoundaryPair(BoundaryCondition.periodic(), BoundaryCondition.outflow())
        assert excinfo.value.field == "boundary"

    def test_matrix_usage(self) -> None:
        """Test which kinds switch to the boundary family."""
        assert BoundaryCondition.outflow().uses_boundary_matrices
        assert BoundaryCondition.inflow(lambda t: np.array([1.0])).uses_boundary_matrices
        assert not BoundaryCondition.reflective().uses_boundary_matrices
        assert not BoundaryCondition.periodic().uses_boundary_matrices


class TestFillGhosts:
    """Tests for fill_ghosts."""

    @pytest.fixture
    def line(self) -> np.ndarray:
        """Five distinct Burgers states."""
        return np.arange(1.0, 6.0)[:, None]

    def test_periodic(self, line: np.ndarray) -> None:
        """Test wrap-around ghosts."""
        ext = fill_ghosts(line, BoundaryPair(), 0.0, 2, BurgersLaw())
        np.testing.assert_array_equal(ext[:, 0], [4, 5, 1, 2, 3, 4, 5, 1, 2])

    def test_inflow_and_outflow(self, line: np.ndarray) -> None:
        """Test prescribed data on the left and a copied cell on the right."""
        boundary = BoundaryPair(
            BoundaryCondition.inflow(lambda t: np.array([10.0 * t])),
            BoundaryCondition.outflow(),
        )
        ext = fill_ghosts(line, boundary, 0.5, 2, BurgersLaw())
        np.testing.assert_array_equal(ext[:, 0], [5, 5, 1, 2, 3, 4, 5, 5, 5])

    def test_reflective_burgers(self, line: np.ndarray) -> None:
        """Test mirrored, negated ghosts for Burgers."""
        walls = BoundaryPair(BoundaryCondition.reflective(), BoundaryCondition.reflective())
        ext = fill_ghosts(line, walls, 0.0, 2, BurgersLaw())
        np.testing.assert_array_equal(ext[:, 0], [-2, -1, 1, 2, 3, 4, 5, -5, -4])

    def test_reflective_euler(self) -> None:
        """Test that walls only flip the normal momentum."""
        law = EulerLaw(dim=1)
        state = law.conservative(np.array([1.0, 2.0]), np.array([[0.5], [0.25]]), np.ones(2))
        walls = BoundaryPair(BoundaryCondition.reflective(), BoundaryCondition.reflective())
        ext = fill_ghosts(state, walls, 0.0, 1, law)
        np.testing.assert_allclose(ext[0], state[0] * [1.0, -1.0, 1.0])
        np.testing.assert_allclose(ext[-1], state[-1] * [1.0, -1.0, 1.0])

    def test_line_shorter_than_halo(self) -> None:
        """Test that a halo wider than the line is rejected."""
        with pytest.raises(GridTooSmallError):
            fill_ghosts(np.ones((2, 1)), BoundaryPair(), 0.0, 3, BurgersLaw())


class TestInterfaceMatrix:
    """Tests for interface_matrix placement."""

    def test_placement_p2(self) -> None:
        """Test the matrix index of every interface of a ten-cell line."""
        matrices = boundary_matrices(2)
        indices = [interface_matrix(i, 10, matrices).index for i in range(11)]
        assert indices == [-2, -1, 0, 0, 0, 0, 0, 0, 0, 1, 2]

    def test_one_sided(self) -> None:
        """Test placement with boundary matrices on the right only."""
        matrices = boundary_matrices(3)
        indices = [
            interface_matrix(i, 7, matrices, left_boundary=False).index for i in range(8)
        ]
        assert indices == [0, 0, 0, 0, 0, 1, 2, 3]

    def test_stencils_stay_inside_one_ghost(self) -> None:
        """Test that boundary stencils reach at most one cell past the line."""
        n, p = 12, 3
        matrices = boundary_matrices(p)
        for i in range(n + 1):
            matrix = interface_matrix(i, n, matrices)
            cell_lo = i - 1 + matrix.lowest
            cell_hi = i - 1 + matrix.highest
            assert cell_lo >= -1
            assert cell_hi <= n

    def test_too_few_cells(self) -> None:
        """Test that N < 2p+1 is rejected."""
        with pytest.raises(GridTooSmallError):
            interface_matrix(0, 6, boundary_matrices(3))


class TestAlphaProviders:
    """Tests for the blend weight providers."""

    def test_constant_range(self) -> None:
        """Test that the constant weight must lie in [0, 1]."""
        assert ConstantAlpha(0.3)(np.ones(1), np.ones(1)) == 0.3
        with pytest.raises(ConfigurationError):
            ConstantAlpha(1.5)

    def test_jump_sensor(self) -> None:
        """Test zero weight on smooth data and full weight across a sign change."""
        sensor = JumpSensorAlpha(c=1.0)
        left = np.array([[1.0], [1.0]])
        right = np.array([[1.0], [-1.0]])
        np.testing.assert_allclose(sensor(left, right), [0.0, 1.0])

    def test_unknown_kind(self) -> None:
        """Test that unknown providers are rejected."""
        with pytest.raises(ConfigurationError):
            alpha_provider("adaptive")


class TestSchemeConfig:
    """Tests for SchemeConfig."""

    def test_default_q(self, burgers_periodic_config: SchemeConfig) -> None:
        """Test that q defaults to 2p-1."""
        assert burgers_periodic_config.q == 3

    def test_matrices_in_use(self, burgers_ec_config: SchemeConfig) -> None:
        """Test that inflow on both sides uses the whole family."""
        indices = sorted(m.index for m in burgers_ec_config.matrices_in_use)
        assert indices == list(range(-3, 4))

    def test_from_settings(self) -> None:
        """Test building a blended config from settings."""
        settings = SchemeSettings(p=2, alpha_kind="jump", jump_c=2.0)
        cfg = SchemeConfig.from_settings(BurgersLaw(), settings, dissipative=True)
        assert cfg.family.blends
        assert isinstance(cfg.alpha, JumpSensorAlpha)
        assert cfg.alpha.c == 2.0
        assert cfg.boundary_order == 3


class TestRhs:
    """Tests for the semidiscrete operator."""

    def test_periodic_conservation(
        self, burgers_periodic_config: SchemeConfig, rng: np.random.Generator
    ) -> None:
        """Test that the total of a periodic rhs vanishes."""
        grid = Grid1D(n=20, halo=2)
        state = rng.uniform(-1.0, 1.0, (20, 1))
        assert abs(np.sum(rhs(grid, state, burgers_periodic_config, 0.0))) < 1e-12

    def test_constant_state_is_steady(self, burgers_ec_config: SchemeConfig) -> None:
        """Test that a constant state matching the inflow data does not move."""
        law = BurgersLaw()
        cfg = SchemeConfig(
            law=law,
            p=3,
            family=burgers_ec_config.family,
            boundary=BoundaryPair(
                BoundaryCondition.inflow(lambda t: np.array([0.7])),
                BoundaryCondition.inflow(lambda t: np.array([0.7])),
            ),
        )
        grid = Grid1D(n=16, halo=3)
        du = rhs(grid, np.full((16, 1), 0.7), cfg, 0.0)
        np.testing.assert_allclose(du, 0.0, atol=1e-14)

    def test_interface_count(self, burgers_ec_config: SchemeConfig) -> None:
        """Test N + 1 fluxes with matching entropy fluxes."""
        grid = Grid1D(n=10, lower=-1.0, upper=1.0, halo=3)
        state = np.linspace(-0.5, 0.5, 10)[:, None]
        fluxes = interface_fluxes(grid, state, burgers_ec_config, 0.0, with_entropy=True)
        assert fluxes.flux.shape == (11, 1)
        assert fluxes.entropy is not None
        assert fluxes.entropy.shape == (11,)

    def test_halo_narrower_than_p(self, burgers_ec_config: SchemeConfig) -> None:
        """Test that the halo must cover the interior stencil."""
        with pytest.raises(GridTooSmallError) as excinfo:
            rhs(Grid1D(n=10, halo=2), np.zeros((10, 1)), burgers_ec_config, 0.0)
        assert excinfo.value.field == "halo"

    def test_non_finite_state(self, burgers_periodic_config: SchemeConfig) -> None:
        """Test that NaN input is reported."""
        state = np.zeros((10, 1))
        state[4] = np.nan
        with pytest.raises(NonPhysicalStateError):
            rhs(Grid1D(n=10, halo=2), state, burgers_periodic_config, 0.0)

    @pytest.mark.parametrize(("p", "minimum_order"), [(1, 1.9), (2, 3.8), (3, 5.7)])
    def test_advection_order(self, p: int, minimum_order: float) -> None:
        """Test the periodic order 2p of the derivative approximation."""
        errors = []
        for n in (16, 32):
            grid = Grid1D(n=n, halo=p)
            x = grid.centers
            state = np.sin(2 * np.pi * x)[:, None]
            du = rhs(grid, state, advection_config(p), 0.0)[:, 0]
            errors.append(np.max(np.abs(du + 2 * np.pi * np.cos(2 * np.pi * x))))
        assert np.log2(errors[0] / errors[1]) > minimum_order


class TestScheme1D:
    """Tests for the Scheme1D wrapper."""

    def test_rejects_small_grid(self, burgers_ec_config: SchemeConfig) -> None:
        """Test that construction checks N >= 2p+1."""
        with pytest.raises(GridTooSmallError):
            Scheme1D(Grid1D(n=5, halo=3), burgers_ec_config)

    def test_wavespeed(self, burgers_ec_config: SchemeConfig) -> None:
        """Test the Burgers speed max |u|."""
        scheme = Scheme1D(Grid1D(n=10, halo=3), burgers_ec_config)
        assert scheme.wavespeed(np.linspace(-2.0, 1.0, 10)[:, None]) == 2.0
