"""Experiment commands: probability sweeps, subsampling experiments and timings."""

from __future__ import annotations

import argparse
import itertools

from kgmm.cli.commands.common import (
    load_dataset,
    load_run_config,
    output_dir,
    progress,
    weights_or_uniform,
    write_report,
)
from kgmm.config.validator import ConfigValidationError, validate_weights
from kgmm.experiments.bench import bench
from kgmm.experiments.sampling import WeightPair, sample_experiment
from kgmm.experiments.sweep import table_sweep
from kgmm.kernel.core import KernelError, KernelSpec


def run_sweep(args: argparse.Namespace) -> int:
    """Execute the sweep command: the weight-grid table per RBF width.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).
    """
    config = load_run_config(args)
    gammas = args.gammas if args.gammas is not None else config.sweep_gammas
    try:
        specs = [KernelSpec.rbf(g) for g in gammas]
    except KernelError as e:
        raise ConfigValidationError(str(e)) from e
    data0 = load_dataset(args.data0, config)
    data1 = load_dataset(args.data1, config)
    progress(args, f"Sweeping {len(config.weight_grid)}x{len(config.weight_grid)} weights for {len(specs)} kernels")

    report = table_sweep(data0, data1, specs, config.weight_grid, workers=config.workers)
    report.config["data0"] = args.data0
    report.config["data1"] = args.data1
    return write_report(args, report, output_dir(args, config, "sweep"), "sweep")


def _weight_pairs(args: argparse.Namespace, grid: list[tuple[float, ...]]) -> list[WeightPair]:
    """Pairs from --weights0/--weights1, or every combination of the configured vectors."""
    if args.weights0 is None and args.weights1 is None:
        return list(itertools.product(grid, grid))
    if args.weights0 is None or args.weights1 is None:
        raise ConfigValidationError("--weights0 and --weights1 must be given together")
    return [(validate_weights(args.weights0, "--weights0"), validate_weights(args.weights1, "--weights1"))]


def run_sample_exp(args: argparse.Namespace) -> int:
    """Execute the sample-exp command: mean and spread over stratified subsamples.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).
    """
    config = load_run_config(args)
    if args.samples is not None:
        config.samples = args.samples
    if args.repeats is not None:
        if args.repeats < 1:
            raise ConfigValidationError(f"--repeats must be >= 1, got {args.repeats}")
        config.repeats = args.repeats
    data0 = load_dataset(args.data0, config)
    data1 = load_dataset(args.data1, config)
    pairs = _weight_pairs(args, config.sample_weights)
    progress(
        args,
        f"{config.repeats} repeats for sizes {config.samples} on {config.workers} workers",
    )

    report = sample_experiment(
        data0,
        data1,
        config.kernel,
        pairs,
        config.samples,
        config.repeats,
        config.seed,
        workers=config.workers,
    )
    report.config["data0"] = args.data0
    report.config["data1"] = args.data1
    directory = output_dir(args, config, "sample-exp")
    return write_report(args, report, directory, "sample-exp")


def run_bench(args: argparse.Namespace) -> int:
    """Execute the bench command: one timed distance per sample size.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).
    """
    config = load_run_config(args)
    sizes = args.sizes if args.sizes is not None else config.samples
    data0 = load_dataset(args.data0, config)
    data1 = load_dataset(args.data1, config)
    weights = (
        weights_or_uniform(args.weights0, "--weights0", len(data0.label_values)),
        weights_or_uniform(args.weights1, "--weights1", len(data1.label_values)),
    )

    report = bench(data0, data1, config.kernel, sizes, weights, config.seed, include_full=not args.no_full)
    report.config["data0"] = args.data0
    report.config["data1"] = args.data1
    return write_report(args, report, output_dir(args, config, "bench"), "bench")
