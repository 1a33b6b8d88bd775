"""Tests for the 2D Euler scheme and the forward-facing-step geometry."""

import numpy as np
import pytest

from src.exceptions import GridTooSmallError, MisalignedStepError
from src.fluxes.fluxcomb import FluxFamily
from src.models.states import EulerState
from src.physics.equations import BurgersLaw, EulerLaw
from src.physics.twopoint import entropy_conservative_flux
from src.schemes.scheme1d import JumpSensorAlpha, SchemeConfig
from src.schemes.scheme2d import (
    FFS_INFLOW,
    Grid2D,
    Scheme2D,
    build_channel_grid,
    build_ffs_grid,
    fill_ghosts_2d,
    inflow_outflow_boundary,
    rhs2d,
    uniform_field,
)
from src.schemes.timeint import TimeLoopConfig, integrate


@pytest.fixture
def ffs_config(euler_family: FluxFamily) -> SchemeConfig:
    """p=2 blended Euler scheme with Mach 3 inflow."""
    return SchemeConfig(
        law=EulerLaw(dim=2),
        p=2,
        family=euler_family,
        alpha=JumpSensorAlpha(),
        boundary=inflow_outflow_boundary(FFS_INFLOW),
    )


class TestGrid2D:
    """Tests for the step grid geometry."""

    def test_ffs_grid(self) -> None:
        """Test the step position on a 30 x 10 grid."""
        grid = build_ffs_grid(10)
        assert (grid.nx, grid.ny) == (30, 10)
        assert (grid.step_i, grid.step_j) == (6, 2)
        assert grid.dx == pytest.approx(grid.dy)
        assert grid.solid.sum() == 24 * 2

    def test_solid_cells(self) -> None:
        """Test that solid cells have centers inside the step."""
        grid = build_ffs_grid(10)
        xx, yy = np.meshgrid(grid.x_centers, grid.y_centers, indexing="ij")
        np.testing.assert_array_equal(grid.solid, (xx >= 0.6) & (yy < 0.2))
        assert grid.fluid[5, 0]
        assert not grid.fluid[6, 0]

    @pytest.mark.parametrize(("ny", "nx"), [(7, None), (10, 25), (0, None)])
    def test_misaligned(self, ny: int, nx: int | None) -> None:
        """Test that step edges must land on cell faces."""
        with pytest.raises(MisalignedStepError):
            build_ffs_grid(ny, nx)

    def test_channel(self) -> None:
        """Test a channel without step."""
        grid = build_channel_grid(ny=4, nx=8, length=2.0)
        assert not grid.has_step
        assert not grid.solid.any()
        assert grid.dx == 0.25


class TestFillGhosts2D:
    """Tests for the 2D halos."""

    @pytest.fixture
    def field(self) -> np.ndarray:
        """A non-uniform admissible field on the 30 x 10 step grid."""
        grid = build_ffs_grid(10)
        law = EulerLaw(dim=2)
        xx, yy = np.meshgrid(grid.x_centers, grid.y_centers, indexing="ij")
        velocity = np.stack([1.0 + 0.1 * xx, 0.2 + 0.1 * yy], axis=-1)
        return law.conservative(1.0 + 0.1 * xx + 0.05 * yy, velocity, 1.0 + 0.02 * yy)

    def test_shapes(self, field: np.ndarray, ffs_config: SchemeConfig) -> None:
        """Test the shapes of the three fill modes."""
        grid = build_ffs_grid(10)
        h = grid.halo
        assert fill_ghosts_2d(grid, field, 0.0, ffs_config, axis=0).shape == (34, 10, 4)
        assert fill_ghosts_2d(grid, field, 0.0, ffs_config, axis=1).shape == (14, 30, 4)
        assert fill_ghosts_2d(grid, field, 0.0, ffs_config).shape == (30 + 2 * h, 10 + 2 * h, 4)

    def test_step_face_mirror(self, field: np.ndarray, ffs_config: SchemeConfig) -> None:
        """Test that the cells behind the step face mirror the fluid in front."""
        grid = build_ffs_grid(10)
        h, si = grid.halo, grid.step_i
        assert si is not None
        ext = fill_ghosts_2d(grid, field, 0.0, ffs_config, axis=0)
        law = EulerLaw(dim=2)
        np.testing.assert_allclose(ext[h + si, 0], law.mirror(field[si - 1, 0], 0))
        np.testing.assert_allclose(ext[h + si + 1, 1], law.mirror(field[si - 2, 1], 0))

    def test_wall_and_step_top(self, field: np.ndarray, ffs_config: SchemeConfig) -> None:
        """Test the bottom wall, the top wall and the step top in the y halo."""
        grid = build_ffs_grid(10)
        h, si, sj = grid.halo, grid.step_i, grid.step_j
        assert si is not None
        ext = fill_ghosts_2d(grid, field, 0.0, ffs_config, axis=1)
        law = EulerLaw(dim=2)
        np.testing.assert_allclose(ext[h - 1, 0], law.mirror(field[0, 0], 1))
        np.testing.assert_allclose(ext[h + grid.ny, 3], law.mirror(field[3, grid.ny - 1], 1))
        np.testing.assert_allclose(ext[h + sj - 1, si + 4], law.mirror(field[si + 4, sj], 1))

    def test_inflow_column(self, field: np.ndarray, ffs_config: SchemeConfig) -> None:
        """Test that the left x halo holds the inflow state."""
        grid = build_ffs_grid(10)
        ext = fill_ghosts_2d(grid, field, 0.0, ffs_config, axis=0)
        np.testing.assert_allclose(ext[0, 5], FFS_INFLOW.to_conservative(dim=2))


class TestRhs2D:
    """Tests for the 2D semidiscrete operator."""

    def test_free_stream_in_channel(self, euler_family: FluxFamily) -> None:
        """Test that a uniform horizontal flow in a channel is steady."""
        state = EulerState(rho=1.0, vx=2.0, p=1.0)
        cfg = SchemeConfig(
            law=EulerLaw(dim=2),
            p=3,
            family=FluxFamily(ec=euler_family.ec),
            boundary=inflow_outflow_boundary(state),
        )
        grid = build_channel_grid(ny=8, nx=12, halo=3)
        du = rhs2d(grid, uniform_field(grid, state), cfg, 0.0)
        np.testing.assert_allclose(du, 0.0, atol=1e-12)

    def test_step_disturbs_flow(self, ffs_config: SchemeConfig) -> None:
        """Test that only the neighbourhood of the step sees the obstacle at t = 0."""
        grid = build_ffs_grid(10)
        du = rhs2d(grid, uniform_field(grid, FFS_INFLOW), ffs_config, 0.0)
        assert grid.step_i is not None
        assert np.all(du[grid.solid] == 0.0)
        np.testing.assert_allclose(du[: grid.step_i - 2], 0.0, atol=1e-12)
        assert np.max(np.abs(du[grid.step_i - 1, 0])) > 1.0

    def test_halo_narrower_than_p(self, euler_family: FluxFamily) -> None:
        """Test the halo check."""
        cfg = SchemeConfig(law=EulerLaw(dim=2), p=3, family=FluxFamily(ec=euler_family.ec))
        grid = Grid2D(nx=8, ny=8, halo=2)
        with pytest.raises(GridTooSmallError):
            rhs2d(grid, uniform_field(grid, FFS_INFLOW), cfg, 0.0)


class TestScheme2D:
    """Tests for the Scheme2D wrapper."""

    def test_requires_2d_euler(self) -> None:
        """Test that other laws are refused."""
        law = BurgersLaw()
        cfg = SchemeConfig(law=law, p=1, family=FluxFamily(ec=entropy_conservative_flux(law)))
        with pytest.raises(TypeError):
            Scheme2D(build_ffs_grid(5), cfg)

    def test_speeds(self, ffs_config: SchemeConfig) -> None:
        """Test |vx| + c = 4 for the Mach 3 state, used in both directions."""
        grid = build_ffs_grid(5)
        scheme = Scheme2D(grid, ffs_config)
        assert scheme.speeds(uniform_field(grid, FFS_INFLOW)) == pytest.approx((4.0, 4.0))
        assert scheme.spacing == (grid.dx, grid.dy)

    def test_short_run_stays_physical(self, ffs_config: SchemeConfig) -> None:
        """Test a few steps of the step problem on a coarse grid."""
        grid = build_ffs_grid(5)
        scheme = Scheme2D(grid, ffs_config)
        result = integrate(
            scheme.rhs,
            uniform_field(grid, FFS_INFLOW),
            TimeLoopConfig(cfl=0.3, t_end=0.05),
            speed_fn=scheme.speeds,
            spacing=scheme.spacing,
        )
        primitives = EulerLaw(dim=2).primitives(result.state[grid.fluid])
        assert result.t == 0.05
        assert np.all(primitives.rho > 0.0)
        assert np.all(primitives.p > 0.0)
