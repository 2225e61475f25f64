"""Helpers shared by the command implementations."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from kgmm.config.loader import load_config
from kgmm.config.resolver import resolve_output_dir
from kgmm.config.validator import Config, ConfigValidationError, validate_config, validate_weights
from kgmm.experiments.generator import generate
from kgmm.experiments.report import ExperimentReport
from kgmm.kernel.core import Dataset, KernelError, KernelFamily, KernelSpec
from kgmm.rkhs.entropic import AmbientDimension, AmbientDimensionError
from kgmm.utils.io import read_dataset

REPORT_FORMATS = ("json", "csv")


def progress(args: argparse.Namespace, message: str) -> None:
    """Print a progress line to stderr when verbose and not quiet."""
    if getattr(args, "verbose", 0) > 0 and not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def load_run_config(args: argparse.Namespace) -> Config:
    """Load and validate the configuration, then apply command-line overrides.

    Raises:
        ConfigLoadError: If the configuration file cannot be read.
        ConfigValidationError: If the configuration or an override is invalid.
    """
    config_path = getattr(args, "config", None)
    config = validate_config(load_config(config_path))

    if getattr(args, "seed", None) is not None:
        if args.seed < 0:
            raise ConfigValidationError(f"--seed must be >= 0, got {args.seed}")
        config.seed = args.seed
    if getattr(args, "workers", None) is not None:
        if args.workers < 1:
            raise ConfigValidationError(f"--workers must be >= 1, got {args.workers}")
        config.workers = args.workers
    if getattr(args, "l_policy", None) is not None:
        try:
            config.l_policy = AmbientDimension.parse(args.l_policy)
        except AmbientDimensionError as e:
            raise ConfigValidationError(str(e)) from e
    config.kernel = _kernel_override(args, config.kernel)
    return config


def _kernel_override(args: argparse.Namespace, spec: KernelSpec) -> KernelSpec:
    kernel_text = getattr(args, "kernel", None)
    gamma = getattr(args, "gamma", None)
    try:
        if kernel_text is not None:
            spec = KernelSpec.parse(kernel_text)
        if gamma is not None:
            if spec.family is not KernelFamily.RBF:
                raise ConfigValidationError(
                    f"--gamma applies to the rbf kernel only, got '{spec.describe()}'"
                )
            spec = KernelSpec.rbf(gamma)
    except KernelError as e:
        raise ConfigValidationError(str(e)) from e
    return spec


def weights_or_uniform(values: Optional[Sequence[float]], flag: str, count: int) -> tuple[float, ...]:
    """Validated weight vector, or uniform weights over ``count`` components when absent."""
    if values is None:
        return tuple([1.0 / count] * count) if count else ()
    return validate_weights(list(values), flag)


def load_dataset(source: str, config: Config) -> Dataset:
    """Read a CSV file, or generate a configured dataset by name with the run seed.

    A name resolves only when no file of that name exists; the generated
    data is the same as ``kgmm gen --name <name>`` writes for the same seed.

    Raises:
        DatasetFormatError: If the file cannot be parsed.
        ConfigValidationError: If the source is neither a file nor a configured dataset.
    """
    path = Path(source).expanduser()
    if path.exists():
        return read_dataset(path)
    if source in config.datasets:
        return generate(config.datasets[source], seed=config.seed)
    raise ConfigValidationError(
        f"'{source}' is neither a file nor a configured dataset "
        f"({', '.join(sorted(config.datasets))})"
    )


def output_dir(
    args: argparse.Namespace,
    config: Config,
    command: str,
    kernel: Optional[KernelSpec] = None,
) -> Path:
    """Directory a command writes into (``--out`` or the configured template)."""
    return resolve_output_dir(
        config,
        command,
        tags=getattr(args, "tags", {}),
        kernel=kernel,
        out=getattr(args, "out", None),
    )


def write_report(args: argparse.Namespace, report: ExperimentReport, directory: Path, stem: str) -> int:
    """Write a report in the requested formats and print each path to stdout."""
    fmt = getattr(args, "format", None)
    formats = (fmt,) if fmt else REPORT_FORMATS
    for path in report.write(directory, stem, formats):
        if not getattr(args, "quiet", False):
            print(path)
    return 0
