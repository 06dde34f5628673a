#!/usr/bin/env python3
"""
Command Line Interface for nullcurve-toolkit.

Synthesizes null curves, verifies the catalog of closed-form curves, and
evaluates torsion and Airy functions. Exit status is 0 on success, 1 when
a verification residual exceeds its threshold and 2 on usage or domain
errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from src.airy import airy_table
from src.catalog import (
    ENTRY_LABELS,
    catalog_entries,
    get_entry,
    sample_closed_form,
    verify_all,
    verify_entry,
)
from src.config import RunConfig, parse_grid
from src.frenet import torsion_schwarzian
from src.generator import make_generator
from src.minkowski import Vec3
from src.serialization import (
    atomic_write,
    render_report_table,
    reports_to_json,
    write_curve,
)
from src.synthesis import CurveSpec, synthesize
from src.utils.error_handling import ConfigError, NullCurveError
from src.utils.logging import setup_logger

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

DEFAULT_CURVE_POINTS = 101
DEFAULT_AIRY_GRID = "-8:8:17"


def setup_cli_logging(
    verbose: bool = False, log_file: Optional[Path] = None
) -> logging.Logger:
    """Set up logging for CLI operations and return the CLI logger."""
    level = "DEBUG" if verbose else None
    setup_logger("src", level=level, log_file=log_file)
    return setup_logger("cli", level=level, log_file=log_file)


def emit(text: str, config: RunConfig) -> None:
    """Write text to the configured output file, or to stdout."""
    if config.output is not None:
        atomic_write(config.output, text)
        print(f"Wrote {config.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def cmd_synthesize(config: RunConfig) -> int:
    """Synthesize the curve of a generator on a grid."""
    gen = make_generator(config.generator_kind())
    grid = config.grid
    if grid is None:
        window = gen.window
        points = np.linspace(window.lo, window.hi, DEFAULT_CURVE_POINTS)
        grid = [float(v) for v in points]
    s0 = config.s0 if config.s0 is not None else grid[0]
    alpha0 = Vec3(*config.alpha0) if config.alpha0 is not None else Vec3.zero()
    tol = config.effective_tolerance()

    curve = synthesize(CurveSpec(gen, config.epsilon, s0, alpha0), grid, tol)
    text = write_curve(curve, None, config.format, tol)
    emit(text, config)
    return EXIT_OK


def _entry_params(config: RunConfig) -> Dict[str, Any]:
    return dict(config.params)


def cmd_verify(config: RunConfig) -> int:
    """Verify one catalog entry or all of them."""
    if config.all_entries:
        if config.params or config.grid is not None:
            raise ConfigError("--all runs the default parameters and grids")
        reports = verify_all(config.tol, config.workers)
    elif config.entry is not None:
        entry = get_entry(config.entry, **_entry_params(config))
        reports = [verify_entry(entry, config.grid, config.tol)]
    else:
        raise ConfigError("verify needs --entry LABEL or --all")

    if config.format == "json" and config.output is None:
        sys.stdout.write(reports_to_json(reports))
    else:
        sys.stdout.write(render_report_table(reports))
        if config.output is not None:
            emit(reports_to_json(reports), config)

    failed = [r.label for r in reports if not r.passed()]
    if failed:
        for report in reports:
            if not report.passed():
                print(
                    f"Verification failed for {report.label}: "
                    f"{', '.join(report.failures())}",
                    file=sys.stderr,
                )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_catalog(config: RunConfig) -> int:
    """List the catalog, or sample one entry's closed form."""
    if config.entry is None:
        print(f"{'entry':<9} {'generator':<24} {'s0':>5}  alpha0")
        for entry in catalog_entries():
            alpha0 = ", ".join(f"{v:.6g}" for v in entry.alpha0)
            print(f"{entry.label:<9} {entry.gen.label:<24} {entry.s0:>5g}  ({alpha0})")
        return EXIT_OK

    entry = get_entry(config.entry, **_entry_params(config))
    grid = config.grid if config.grid is not None else list(entry.default_grid)
    curve = sample_closed_form(entry, grid)
    emit(write_curve(curve, None, config.format), config)
    return EXIT_OK


def cmd_torsion(config: RunConfig) -> int:
    """Torsion (Schwarzian of the generator) at a point or along a grid."""
    gen = make_generator(config.generator_kind())
    if config.s is not None:
        print(repr(torsion_schwarzian(gen, config.s)))
        return EXIT_OK
    if config.grid is None:
        raise ConfigError("torsion needs --at S or --grid")

    lines = ["s,tau"]
    for s in config.grid:
        lines.append(f"{s:.17g},{torsion_schwarzian(gen, s):.17g}")
    emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_airy_table(config: RunConfig) -> int:
    """Tabulate Ai, Bi, Ai', Bi' and the Wronskian."""
    grid = config.grid if config.grid is not None else parse_grid(DEFAULT_AIRY_GRID)
    rows = airy_table(grid)
    lines = ["x,ai,bi,aip,bip,wronskian"]
    for x, value in rows:
        cells = [x, value.ai, value.bi, value.aip, value.bip, value.wronskian()]
        lines.append(",".join(f"{v:.17g}" for v in cells))
    emit("\n".join(lines) + "\n", config)
    return EXIT_OK


HANDLERS = {
    "synthesize": cmd_synthesize,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "torsion": cmd_torsion,
    "airy-table": cmd_airy_table,
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", help="Grid as lo:hi:n or a comma list")
    common.add_argument("--tol", type=float, help="Quadrature tolerance")
    common.add_argument("--format", choices=["csv", "json"], help="Output format")
    common.add_argument("--output", "-o", help="Output file (written atomically)")
    return common


def _generator_options() -> argparse.ArgumentParser:
    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--gen", help="Generator kind (identity, cot, exp, ...)")
    gen.add_argument("--c", type=float, help="Parameter c (cot, exp)")
    gen.add_argument("--b", type=float, help="Parameter b (tanlog, power)")
    gen.add_argument("--lam", type=float, help="Parameter lambda (airy)")
    return gen


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nullcurve",
        description="Null curves in Minkowski 3-space from generator functions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s synthesize --gen identity --s0 0 --alpha0 0,0,0 --grid 0:2:201
  %(prog)s torsion --gen exp --c 3 --at 0.7
  %(prog)s verify --entry slant-d --grid 0.1:3:101
  %(prog)s verify --all --workers 4
  %(prog)s airy-table --grid=-8:8:33 -o airy.csv
        """,
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Enable verbose logging"
    )
    parser.add_argument("--log-file", help="Also log to this file")
    parser.add_argument("--config", help="key=value configuration file")

    common = _common_options()
    gen = _generator_options()
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    synth = subparsers.add_parser(
        "synthesize", parents=[common, gen], help="Synthesize a null curve"
    )
    synth.add_argument("--eps", type=int, choices=[1, -1], help="Orientation")
    synth.add_argument("--s0", type=float, help="Anchor parameter")
    synth.add_argument("--alpha0", help="Anchor point x,y,z")

    verify = subparsers.add_parser(
        "verify", parents=[common], help="Verify catalog entries"
    )
    verify.add_argument("--entry", choices=ENTRY_LABELS, help="Catalog entry")
    verify.add_argument("--all", action="store_true", default=None, help="All entries")
    verify.add_argument("--c", type=float, help="Parameter c (helix-b, helix-c)")
    verify.add_argument("--a", type=float, help="Parameter a (slant-b, slant-c)")
    verify.add_argument("--lam", type=float, help="Parameter lambda (airy)")
    verify.add_argument("--workers", type=int, help="Thread pool size for --all")

    catalog = subparsers.add_parser(
        "catalog", parents=[common], help="List or sample catalog entries"
    )
    catalog.add_argument("--entry", choices=ENTRY_LABELS, help="Entry to sample")
    catalog.add_argument("--c", type=float, help="Parameter c (helix-b, helix-c)")
    catalog.add_argument("--a", type=float, help="Parameter a (slant-b, slant-c)")
    catalog.add_argument("--lam", type=float, help="Parameter lambda (airy)")

    torsion = subparsers.add_parser(
        "torsion", parents=[common, gen], help="Torsion of a generator"
    )
    torsion.add_argument("--at", type=float, help="Evaluation point")

    subparsers.add_parser(
        "airy-table", parents=[common], help="Tabulate Airy functions"
    )
    return parser


# argparse destinations to RunConfig keys
FLAG_KEYS = {
    "gen": "kind",
    "eps": "epsilon",
    "s0": "s0",
    "alpha0": "alpha0",
    "grid": "grid",
    "tol": "tol",
    "output": "output",
    "format": "format",
    "entry": "entry",
    "all": "all",
    "at": "s",
    "workers": "workers",
    "c": "c",
    "b": "b",
    "a": "a",
    "lam": "lam",
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge the configuration file (if any) with command-line flags."""
    if args.config:
        config = RunConfig.from_file(Path(args.config))
    else:
        config = RunConfig()
    pairs: Dict[str, Any] = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            pairs[key] = value
    config.update(pairs)
    if args.command:
        config.command = args.command
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    log_file = Path(args.log_file) if args.log_file else None
    logger = setup_cli_logging(args.verbose, log_file)

    try:
        config = build_config(args)
        if config.command not in HANDLERS:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        logger.debug(f"Running {config.command} with {config}")
        return HANDLERS[config.command](config)
    except NullCurveError as e:
        code = f" [{e.error_code}]" if e.error_code else ""
        print(f"Error{code}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
