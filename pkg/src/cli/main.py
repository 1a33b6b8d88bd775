"""Command-line entry point: `ebf <subcommand> [flags]`.

Every flag has a config-file key (see `--config`); flags given on the
command line override the file. Exit codes: 0 success, 1 I/O or data
error, 2 invalid configuration, 3 numerical failure or failed checks.
"""

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from src.cli import experiments
from src.cli.writers import read_config_file
from src.exceptions import ConfigurationError, EBFError, NumericalError
from src.models.run import RunConfig
from src.utils.config import Settings, get_settings
from src.utils.logging import configure_logging

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

CSV_SCHEMAS = """\
output tables (CSV, or Parquet with --table-format parquet):
  matrices     A_p<p>_<s>.csv        row, col, num, den   (offsets, reduced fraction)
               condition.csv         step, condition
  burgers-bc   snapshots.csv         t, x, u
               entropy.csv           t, max_abs_residual, max_positive_residual,
                                     total_entropy, scale
  converge     convergence.csv       N, e1, e2, einf, eoc_l1, eoc_l2, eoc_linf
               N<n>/solution.csv     t, x, u
  ffs          field_t<t>.csv        t, i, j, x, y, rho, vx, vy, p, solid
  check        checks.csv            name, passed, value, threshold, detail
every run also writes manifest.ini, usable as --config to repeat it.
"""

SUBCOMMANDS: dict[str, tuple[str, Callable[[RunConfig, Settings], Any]]] = {
    "matrices": ("export the boundary-aware flux matrices", experiments.cmd_matrices),
    "burgers-bc": ("Burgers with oscillating inflow data", experiments.cmd_burgers_bc),
    "converge": ("convergence study against the ENO2 reference", experiments.cmd_converge),
    "ffs": ("Mach 3 forward-facing step", experiments.cmd_ffs),
    "check": ("run the property suites", experiments.cmd_check),
}


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, help="half-order of the interior flux")
    parser.add_argument("--q", type=int, help="boundary order (default 2p-1)")
    parser.add_argument("--n", help="grid size, or comma-separated sizes for converge")
    parser.add_argument("--cfl", type=float, help="CFL number")
    parser.add_argument("--tend", dest="t_end", type=float, help="final time")
    parser.add_argument("--law", choices=["burgers", "euler"])
    parser.add_argument("--alpha", choices=["constant", "jump"], help="dissipation steering")
    parser.add_argument("--alpha-const", dest="alpha_const", type=float, help="constant blend")
    parser.add_argument("--jump-c", dest="jump_c", type=float, help="jump sensor gain")
    parser.add_argument(
        "--dissipative", action="store_true", help="blend the dissipative flux in"
    )
    parser.add_argument("--out", type=Path, help="output base directory")
    parser.add_argument("--svg", action="store_true", help="render SVG plots")
    parser.add_argument(
        "--table-format", dest="table_format", choices=["csv", "parquet"], help="table format"
    )
    parser.add_argument(
        "--latex", action=argparse.BooleanOptionalAction, help="write LaTeX matrices"
    )
    parser.add_argument("--jobs", type=int, help="parallel runs in a sweep")
    parser.add_argument("--config", type=Path, help="INI config or manifest to start from")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebf",
        description="Entropy conservative boundary fluxes: matrices and experiments.",
        epilog=CSV_SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, (summary, _) in SUBCOMMANDS.items():
        child = sub.add_parser(
            name,
            help=summary,
            description=summary,
            epilog=CSV_SCHEMAS,
            formatter_class=argparse.RawDescriptionHelpFormatter,
            argument_default=argparse.SUPPRESS,
        )
        _add_run_flags(child)
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge a config file with the flags given on the command line.

    Raises:
        ValidationError: If the merged values are invalid.
        FileNotFoundError: If the config file does not exist.
    """
    given = vars(args).copy()
    values: dict[str, Any] = {}
    config_path = given.pop("config", None)
    if config_path is not None:
        values.update(read_config_file(config_path))
    values.update(given)
    return RunConfig(**values)


def _exit_code(result: Any) -> int:
    if isinstance(result, list) and any(not getattr(r, "passed", True) for r in result):
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Parse, validate, run one subcommand and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.logging)
    log = logger.bind(component="cli", subcommand=args.subcommand)

    try:
        run = run_config_from_args(args)
    except ValidationError as e:
        fields = [".".join(str(part) for part in err["loc"]) for err in e.errors()]
        log.error("config_invalid", fields=fields, error=str(e))
        return EXIT_CONFIG
    except FileNotFoundError as e:
        log.error("config_missing", path=str(e))
        return EXIT_CONFIG

    _, command = SUBCOMMANDS[run.subcommand]
    log.info("run_started", **run.model_dump(mode="json", exclude_none=True))
    try:
        result = command(run, settings)
    except ConfigurationError as e:
        log.error("run_rejected", error=str(e), details=e.details)
        return EXIT_CONFIG
    except NumericalError as e:
        log.error("run_failed", error=str(e), details=e.details)
        return EXIT_NUMERICAL
    except EBFError as e:
        log.error("run_aborted", error=str(e), details=e.details)
        return EXIT_IO

    code = _exit_code(result)
    log.info("run_completed", exit_code=code)
    return code


if __name__ == "__main__":
    sys.exit(main())
