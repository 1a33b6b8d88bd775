"""Tests for the experiment output writers."""

import configparser
from pathlib import Path

import numpy as np
import pandas as pd
import pyarrow.parquet as pq
import pytest

from src.cli.writers import MANIFEST_NAME, OutputWriter, matrix_stem, read_config_file
from src.exceptions import EmptyDataError
from src.fluxes.fluxcomb import boundary_matrices
from src.models.run import RunConfig
from src.physics.equations import EulerLaw
from src.schemes.scheme2d import FFS_INFLOW, build_ffs_grid, uniform_field


class TestTables:
    """Tests for write_table."""

    def test_csv(self, tmp_path: Path) -> None:
        """Test a CSV table with full float precision."""
        writer = OutputWriter(tmp_path / "out")
        frame = pd.DataFrame({"t": [0.0, 1.0], "value": [1.0 / 3.0, 2.0]})
        path = writer.write_table(frame, "series")
        assert path == tmp_path / "out" / "series.csv"
        assert pd.read_csv(path)["value"].iloc[0] == 1.0 / 3.0

    def test_parquet_metadata(self, tmp_path: Path) -> None:
        """Test that Parquet tables carry run metadata in their schema."""
        writer = OutputWriter(tmp_path, table_format="parquet")
        path = writer.write_table(pd.DataFrame({"N": [64]}), "convergence", {"t_end": 10.0})
        assert path.suffix == ".parquet"
        assert pq.read_schema(path).metadata[b"t_end"] == b"10.0"
        assert pd.read_parquet(path)["N"].tolist() == [64]

    def test_empty_table(self, tmp_path: Path) -> None:
        """Test that empty tables are refused."""
        with pytest.raises(EmptyDataError):
            OutputWriter(tmp_path).write_table(pd.DataFrame(), "empty")

    def test_line_snapshots(self, tmp_path: Path) -> None:
        """Test the long (t, x, u) layout."""
        x = np.array([0.25, 0.75])
        snapshots = {1.0: np.array([[3.0], [4.0]]), 0.0: np.array([[1.0], [2.0]])}
        path = OutputWriter(tmp_path).write_line_snapshots(x, snapshots, "snapshots")
        frame = pd.read_csv(path)
        assert frame["t"].tolist() == [0.0, 0.0, 1.0, 1.0]
        assert frame["u"].tolist() == [1.0, 2.0, 3.0, 4.0]

    def test_field(self, tmp_path: Path) -> None:
        """Test the contour-ready rows of a step field."""
        grid = build_ffs_grid(5)
        field = uniform_field(grid, FFS_INFLOW)
        path = OutputWriter(tmp_path).write_field(grid, field, EulerLaw(dim=2), 0.0, "field_t0")
        frame = pd.read_csv(path)
        assert len(frame) == grid.nx * grid.ny
        assert list(frame.columns) == ["t", "i", "j", "x", "y", "rho", "vx", "vy", "p", "solid"]
        assert frame["solid"].sum() == grid.solid.sum()
        np.testing.assert_allclose(frame["vx"], 3.0)


class TestMatrices:
    """Tests for matrix exports."""

    def test_stem(self) -> None:
        """Test the file stems of both families."""
        matrices = boundary_matrices(3)
        assert matrix_stem(matrices[-2]) == "A_p3_m2"
        assert matrix_stem(matrices[0]) == "A_p3_0"
        assert matrix_stem(matrices[1]) == "A_p3_1"

    def test_csv_and_latex(self, tmp_path: Path) -> None:
        """Test that entries are written as reduced fractions."""
        matrix = boundary_matrices(2)[-1]
        paths = OutputWriter(tmp_path).write_matrix(matrix)
        assert [p.name for p in paths] == ["A_p2_m1.csv", "A_p2_m1.tex"]
        frame = pd.read_csv(paths[0])
        assert list(frame.columns) == ["row", "col", "num", "den"]
        row = frame[(frame["row"] == 0) & (frame["col"] == 1)].iloc[0]
        assert (row["num"], row["den"]) == (2, 3)
        assert paths[1].read_text().startswith("A^{2, -1}")

    def test_without_latex(self, tmp_path: Path) -> None:
        """Test that LaTeX output can be switched off."""
        paths = OutputWriter(tmp_path).write_matrix(boundary_matrices(1)[0], latex=False)
        assert len(paths) == 1


class TestManifest:
    """Tests for manifests and config files."""

    def test_manifest_sections(self, tmp_path: Path) -> None:
        """Test the run sections, meta and versions."""
        run = RunConfig(subcommand="matrices", p=2)
        path = OutputWriter(tmp_path).write_manifest(run, {"max_condition": 12.5})
        assert path.name == MANIFEST_NAME
        parser = configparser.ConfigParser()
        parser.read(path)
        assert parser["scheme"]["p"] == "2"
        assert parser["meta"]["max_condition"] == "12.5"
        assert "created_at" in parser["meta"]
        assert "numpy" in parser["versions"]

    def test_manifest_repeats_run(self, tmp_path: Path) -> None:
        """Test that a manifest read as config gives back the run."""
        run = RunConfig(subcommand="converge", p=3, q=4, n=(64, 78), cfl=0.4, jobs=2)
        path = OutputWriter(tmp_path).write_manifest(run, {"eoc_l1": 4.1})
        values = read_config_file(path)
        assert "eoc_l1" not in values
        assert RunConfig(**values) == run

    def test_missing_config(self, tmp_path: Path) -> None:
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            read_config_file(tmp_path / "absent.ini")
