"""Experiment output: tables, matrix exports, fields and run manifests.

Tables go through pandas (CSV, or Parquet via pyarrow); manifests are INI
files holding the RunConfig sections plus package versions, so a run can be
repeated from its manifest with `--config`.
"""

import configparser
from datetime import UTC, datetime
from importlib import metadata
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq
import structlog
from numpy.typing import NDArray

from src.exceptions import EmptyDataError, WriteError
from src.fluxes.fluxcomb import FluxMatrix
from src.models.run import RunConfig
from src.physics.equations import EulerLaw
from src.schemes.scheme2d import Grid2D

logger = structlog.get_logger(__name__)

MANIFEST_NAME = "manifest.ini"
VERSIONED_PACKAGES = ("numpy", "pandas", "pyarrow", "pydantic", "structlog", "matplotlib")


def matrix_stem(matrix: FluxMatrix) -> str:
    """File stem of a matrix, e.g. A_p3_m2 for A^{3,-2}."""
    sign = "m" if matrix.index < 0 else ""
    return f"A_p{matrix.p}_{sign}{abs(matrix.index)}"


def package_versions() -> dict[str, str]:
    versions = {}
    for name in VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "not installed"
    return versions


class OutputWriter:
    """Writes the artifacts of one experiment into its directory.

    Args:
        directory: Experiment output directory, created on demand.
        table_format: "csv" or "parquet".

    Example:
        writer = OutputWriter(Path("results/burgers-bc"))
        writer.write_table(frame, "entropy")
    """

    def __init__(self, directory: Path, table_format: str = "csv") -> None:
        self.directory = Path(directory)
        self.table_format = table_format
        self._log = logger.bind(component="output_writer", directory=str(self.directory))

    def _target(self, name: str, suffix: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        return self.directory / f"{name}.{suffix}"

    def write_table(
        self, frame: pd.DataFrame, name: str, table_metadata: dict[str, Any] | None = None
    ) -> Path:
        """Write a table in the configured format.

        Parquet files carry `table_metadata` in their schema metadata; CSV files
        get it in the manifest instead.

        Raises:
            EmptyDataError: If the frame has no rows.
            WriteError: If writing fails.
        """
        if frame.empty:
            raise EmptyDataError("refusing to write an empty table", details={"name": name})
        try:
            if self.table_format == "parquet":
                target = self._target(name, "parquet")
                table = pa.Table.from_pandas(frame, preserve_index=False)
                if table_metadata:
                    extra = {k.encode(): str(v).encode() for k, v in table_metadata.items()}
                    table = table.replace_schema_metadata({**(table.schema.metadata or {}), **extra})
                pq.write_table(table, target)
            else:
                target = self._target(name, "csv")
                frame.to_csv(target, index=False, float_format="%.17g")
        except OSError as e:
            raise WriteError(
                f"Failed to write table {name}: {e}", details={"name": name, "error": str(e)}
            ) from e
        self._log.info("table_written", name=name, rows=len(frame), path=str(target))
        return target

    def write_text(self, text: str, name: str) -> Path:
        """Write a text artifact such as a LaTeX array.

        Raises:
            WriteError: If writing fails.
        """
        target = self.directory / name
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            target.write_text(text)
        except OSError as e:
            raise WriteError(f"Failed to write {name}: {e}", details={"name": name}) from e
        return target

    def write_matrix(self, matrix: FluxMatrix, latex: bool = True) -> list[Path]:
        """Entries as (row, col, numerator, denominator) rows, plus a LaTeX array."""
        frame = pd.DataFrame(matrix.to_csv_rows(), columns=["row", "col", "num", "den"])
        stem = matrix_stem(matrix)
        # matrices are always CSV, their entries are exact
        target = self._target(stem, "csv")
        try:
            frame.to_csv(target, index=False)
        except OSError as e:
            raise WriteError(f"Failed to write matrix {stem}: {e}", details={"name": stem}) from e
        paths = [target]
        if latex:
            paths.append(self.write_text(matrix.to_latex() + "\n", f"{stem}.tex"))
        return paths

    def write_line_snapshots(self, x: NDArray, snapshots: dict[float, NDArray], name: str) -> Path:
        """Long table (t, x, u) of scalar snapshots."""
        if not snapshots:
            raise EmptyDataError("no snapshots to write", details={"name": name})
        frames = [
            pd.DataFrame({"t": t, "x": x, "u": np.asarray(state)[:, 0]})
            for t, state in sorted(snapshots.items())
        ]
        return self.write_table(pd.concat(frames, ignore_index=True), name)

    def write_field(self, grid: Grid2D, field: NDArray, law: EulerLaw, t: float, name: str) -> Path:
        """Contour-ready rows (x, y, rho, vx, vy, p, solid) of a 2D Euler field."""
        rho, velocity, p = law.primitives(field)
        xx, yy = np.meshgrid(grid.x_centers, grid.y_centers, indexing="ij")
        frame = pd.DataFrame(
            {
                "t": t,
                "i": np.repeat(np.arange(grid.nx), grid.ny),
                "j": np.tile(np.arange(grid.ny), grid.nx),
                "x": xx.ravel(),
                "y": yy.ravel(),
                "rho": rho.ravel(),
                "vx": velocity[..., 0].ravel(),
                "vy": velocity[..., 1].ravel(),
                "p": p.ravel(),
                "solid": grid.solid.ravel(),
            }
        )
        return self.write_table(frame, name)

    def write_manifest(self, config: RunConfig, extra: dict[str, Any] | None = None) -> Path:
        """INI manifest: the run config sections, [meta] and [versions].

        Raises:
            WriteError: If writing fails.
        """
        parser = configparser.ConfigParser()
        for section, values in config.to_sections().items():
            parser[section] = values
        meta = {"created_at": datetime.now(UTC).isoformat()}
        meta.update({k: str(v) for k, v in (extra or {}).items()})
        parser["meta"] = meta
        parser["versions"] = package_versions()
        target = self.directory / MANIFEST_NAME
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            with target.open("w") as fh:
                parser.write(fh)
        except OSError as e:
            raise WriteError(f"Failed to write manifest: {e}", details={"path": str(target)}) from e
        self._log.info("manifest_written", path=str(target))
        return target


def read_config_file(path: Path) -> dict[str, str]:
    """Flatten the known sections of an INI config into RunConfig keys.

    Sections [meta] and [versions] of a manifest are ignored.
    """
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(path)
    values: dict[str, str] = {}
    for section in parser.sections():
        if section in ("meta", "versions"):
            continue
        values.update(parser[section])
    return values
