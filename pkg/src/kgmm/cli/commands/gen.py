"""Gen command implementation."""

from __future__ import annotations

import argparse
from dataclasses import replace

from kgmm.cli.commands.common import load_run_config, output_dir, progress
from kgmm.config.validator import ConfigValidationError
from kgmm.experiments.generator import DatasetSpec, generate
from kgmm.experiments.report import ExperimentError
from kgmm.utils.io import write_dataset


def _with_counts(spec: DatasetSpec, counts: list[int]) -> DatasetSpec:
    if len(counts) != len(spec.components):
        raise ConfigValidationError(
            f"--counts needs {len(spec.components)} values, got {len(counts)}"
        )
    try:
        return DatasetSpec.of([replace(c, count=k) for c, k in zip(spec.components, counts)])
    except ExperimentError as e:
        raise ConfigValidationError(str(e)) from e


def run_gen(args: argparse.Namespace) -> int:
    """Execute the gen command: draw a configured dataset and write it as CSV.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).
    """
    config = load_run_config(args)
    name = args.name
    if name not in config.datasets:
        raise ConfigValidationError(
            f"Unknown dataset '{name}'. Configured: {', '.join(sorted(config.datasets))}"
        )
    spec = config.datasets[name]
    if args.counts is not None:
        spec = _with_counts(spec, args.counts)

    dataset = generate(spec, seed=config.seed)
    path = write_dataset(dataset, output_dir(args, config, "gen") / f"{name}.csv")
    progress(args, f"Generated {dataset.n} points in {len(spec.components)} components")
    if not args.quiet:
        print(path)
    return 0
