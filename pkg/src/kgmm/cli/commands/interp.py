"""Interp command implementation."""

from __future__ import annotations

import argparse

from kgmm.cli.commands.common import load_run_config, output_dir, progress, write_report
from kgmm.config.validator import ConfigValidationError
from kgmm.experiments.interp import interp_emit
from kgmm.experiments.report import ExperimentError
from kgmm.mixture.models import GaussianMixture


def _mixture(name: str, mixtures: dict[str, GaussianMixture]) -> GaussianMixture:
    if name not in mixtures:
        raise ConfigValidationError(
            f"Unknown mixture '{name}'. Configured: {', '.join(sorted(mixtures))}"
        )
    return mixtures[name]


def run_interp(args: argparse.Namespace) -> int:
    """Execute the interp command: density grids along the mixture geodesic.

    Writes ``interp-density.csv`` (grid coordinates and one density column
    per t) next to the ``interp`` report.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).
    """
    config = load_run_config(args)
    t_values = args.t if args.t is not None else config.t_values
    if not t_values or any(not 0.0 <= t <= 1.0 for t in t_values):
        raise ConfigValidationError(f"--t values must lie in [0, 1], got {t_values}")
    mu0 = _mixture(args.mu0, config.mixtures)
    mu1 = _mixture(args.mu1, config.mixtures)

    table, report = interp_emit(mu0, mu1, t_values, config.grid, grid_ot=args.grid_ot)
    report.config["mu0"] = args.mu0
    report.config["mu1"] = args.mu1
    progress(args, f"Evaluated {len(t_values)} densities on {table.values.shape[0]} grid points")

    directory = output_dir(args, config, "interp")
    density_path = directory / "interp-density.csv"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        density_path.write_text(table.to_csv(), encoding="utf-8", newline="")
    except OSError as e:
        raise ExperimentError(f"Cannot write {density_path}: {e}") from e
    if not args.quiet:
        print(density_path)
    return write_report(args, report, directory, "interp")
