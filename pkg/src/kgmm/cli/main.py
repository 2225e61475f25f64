"""CLI entry point and argument parser structure."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from kgmm import __version__

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_INTERRUPTED = 130


def _float_list(text: str) -> list[float]:
    """argparse type for comma-separated reals, e.g. ``0.1,0.9``."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _int_list(text: str) -> list[int]:
    """argparse type for comma-separated integers, e.g. ``200,400``."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from e


def _parent_parsers() -> dict[str, argparse.ArgumentParser]:
    """Option groups shared by several subcommands."""
    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("data0", help="First dataset: CSV file or configured dataset name")
    pair.add_argument("data1", help="Second dataset: CSV file or configured dataset name")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument(
        "--kernel",
        help="Kernel: rbf[:gamma], linear or polynomial[:degree[:offset]]",
    )
    kernel.add_argument("--gamma", type=float, help="RBF width (overrides config)")

    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument("--seed", type=int, help="Seed of all random draws (overrides config)")

    workers = argparse.ArgumentParser(add_help=False)
    workers.add_argument("--workers", type=int, help="Thread count (overrides config)")

    weights = argparse.ArgumentParser(add_help=False)
    weights.add_argument("--weights0", type=_float_list, metavar="W", help="Weights of the first mixture, e.g. 0.1,0.9")
    weights.add_argument("--weights1", type=_float_list, metavar="W", help="Weights of the second mixture")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", type=Path, help="Output directory (bypasses the output template)")
    output.add_argument("--format", choices=["csv", "json"], help="Report format (default: both)")
    output.add_argument(
        "-t", "--tag",
        action="append",
        dest="tag",
        metavar="TAG",
        help="Tag in format key=value or just key (can be specified multiple times)",
    )

    return {
        "pair": pair,
        "kernel": kernel,
        "seed": seed,
        "workers": workers,
        "weights": weights,
        "output": output,
    }


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with all subcommands.

    Returns:
        Configured ArgumentParser.
    """
    parser = argparse.ArgumentParser(
        prog="kgmm",
        description="Wasserstein-type distances between Gaussian mixtures in a kernel feature space",
        epilog="Run 'kgmm <command> --help' for more information on a specific command.",
    )

    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="Increase verbosity (can be repeated)",
    )
    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        help="Suppress non-error output",
    )
    parser.add_argument(
        "--config",
        type=Path,
        help="Configuration file (default: the per-user config.yml)",
    )
    parser.add_argument(
        "-t", "--tag",
        action="append",
        default=[],
        dest="global_tag",
        metavar="TAG",
        help="Tag in format key=value or just key (can be specified multiple times)",
    )

    parents = _parent_parsers()
    subparsers = parser.add_subparsers(
        dest="command",
        title="commands",
        metavar="<command>",
    )

    # gen command
    gen_parser = subparsers.add_parser(
        "gen",
        parents=[parents["seed"], parents["output"]],
        help="Generate a labeled dataset",
        description="Draw a configured dataset with a fixed seed and write it as CSV.",
    )
    gen_parser.add_argument("--name", default="dataset1", help="Configured dataset name (default: dataset1)")
    gen_parser.add_argument("--counts", type=_int_list, metavar="N", help="Points per component, e.g. 500,500")

    # kw2 command
    subparsers.add_parser(
        "kw2",
        parents=[parents["pair"], parents["kernel"], parents["workers"]],
        help="Kernel Wasserstein distance between two samples",
        description="Print MMD^2, both covariance traces and KW2 between two samples as JSON.",
    )

    # gmm-dist command
    gmm_parser = subparsers.add_parser(
        "gmm-dist",
        parents=[parents["pair"], parents["kernel"], parents["workers"], parents["weights"]],
        help="Mixture distance between two labeled datasets",
        description="Distance between mixtures whose components are the labeled groups.",
    )
    gmm_parser.add_argument(
        "--input-space",
        action="store_true",
        help="Use input-space Gaussian fits and the W2 closed form",
    )

    # sweep command
    sweep_parser = subparsers.add_parser(
        "sweep",
        parents=[parents["pair"], parents["workers"], parents["output"]],
        help="Probability table over the weight grid",
        description="Mixture distance for every pair of weight vectors, per RBF width.",
    )
    sweep_parser.add_argument("--gammas", type=_float_list, metavar="G", help="RBF widths, e.g. 1,10")

    # interp command
    interp_parser = subparsers.add_parser(
        "interp",
        parents=[parents["output"]],
        help="Density grids along the mixture geodesic",
        description="Evaluate the displacement interpolation of two configured mixtures on a grid.",
    )
    interp_parser.add_argument("--mu0", default="mu0", help="Configured start mixture (default: mu0)")
    interp_parser.add_argument("--mu1", default="mu1", help="Configured end mixture (default: mu1)")
    interp_parser.add_argument("--t", type=_float_list, metavar="T", help="Times in [0, 1], e.g. 0,0.5,1")
    interp_parser.add_argument(
        "--grid-ot",
        action="store_true",
        help="Also emit the grid transport reconstruction (1-D only)",
    )

    # entropic command
    entropic_parser = subparsers.add_parser(
        "entropic",
        parents=[parents["pair"], parents["kernel"], parents["workers"]],
        help="Entropy-regularized distance",
        description="Entropy-regularized KW2 (or W2 with --input-space) between two samples.",
    )
    strength = entropic_parser.add_mutually_exclusive_group(required=True)
    strength.add_argument("--epsilon", type=float, help="Regularization strength")
    strength.add_argument("--sigma2", type=float, help="Noise variance (epsilon = 2 sigma2)")
    entropic_parser.add_argument("--l-policy", help="Ambient dimension: rank, span or fixed:<n>")
    entropic_parser.add_argument(
        "--input-space",
        action="store_true",
        help="Fit input-space Gaussians and use the closed form",
    )
    entropic_parser.add_argument(
        "--barycenter",
        type=_float_list,
        metavar="W",
        help="With --input-space, also report the entropic barycenter for these weights",
    )

    # sample-exp command
    sample_parser = subparsers.add_parser(
        "sample-exp",
        parents=[
            parents["pair"],
            parents["kernel"],
            parents["seed"],
            parents["workers"],
            parents["weights"],
            parents["output"],
        ],
        help="Subsampling experiment",
        description="Mean and standard deviation of the mixture distance over stratified subsamples.",
    )
    sample_parser.add_argument("--samples", type=_int_list, metavar="N", help="Sample sizes, e.g. 200,400")
    sample_parser.add_argument("--repeats", type=int, help="Subsamples per size")

    # bench command
    bench_parser = subparsers.add_parser(
        "bench",
        parents=[parents["pair"], parents["kernel"], parents["seed"], parents["weights"], parents["output"]],
        help="Time the mixture distance against sample size",
        description="Wall-clock time of one distance evaluation per sample size.",
    )
    bench_parser.add_argument("--sizes", type=_int_list, metavar="N", help="Ascending sample sizes")
    bench_parser.add_argument("--no-full", action="store_true", help="Skip timing the full datasets")

    # init command (with subcommands)
    init_parser = subparsers.add_parser(
        "init",
        help="Initialize configuration",
        description="Create the default configuration file.",
    )
    init_subparsers = init_parser.add_subparsers(
        dest="init_command",
        title="init commands",
        metavar="<init_command>",
    )
    init_subparsers.add_parser(
        "config",
        help="Create default configuration file",
        description="Create a default configuration file with documentation.",
    )

    return parser


def _parse_tags(tag_args: list[str]) -> dict[str, str]:
    """Parse tag arguments into a dictionary.

    Args:
        tag_args: List of tag strings in format "key=value" or "key".

    Returns:
        Dictionary mapping tag keys to values (empty string if no value).
    """
    tags: dict[str, str] = {}
    for tag_arg in tag_args:
        key, _, value = tag_arg.partition("=")
        tags[key] = value
    return tags


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _exit_code(error: Exception) -> int:
    from kgmm.config.loader import ConfigLoadError
    from kgmm.config.resolver import ResolverError
    from kgmm.config.validator import ConfigValidationError

    if isinstance(error, (ConfigLoadError, ConfigValidationError, ResolverError)):
        return EXIT_CONFIG_ERROR
    return EXIT_ERROR


def _dispatch(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.command == "gen":
        from kgmm.cli.commands.gen import run_gen
        return run_gen(args)

    elif args.command == "kw2":
        from kgmm.cli.commands.distance import run_kw2
        return run_kw2(args)

    elif args.command == "gmm-dist":
        from kgmm.cli.commands.distance import run_gmm_dist
        return run_gmm_dist(args)

    elif args.command == "sweep":
        from kgmm.cli.commands.experiments import run_sweep
        return run_sweep(args)

    elif args.command == "interp":
        from kgmm.cli.commands.interp import run_interp
        return run_interp(args)

    elif args.command == "entropic":
        from kgmm.cli.commands.entropic import run_entropic
        return run_entropic(args)

    elif args.command == "sample-exp":
        from kgmm.cli.commands.experiments import run_sample_exp
        return run_sample_exp(args)

    elif args.command == "bench":
        from kgmm.cli.commands.experiments import run_bench
        return run_bench(args)

    elif args.command == "init":
        if args.init_command is None:
            parser.parse_args(["init", "--help"])
            return EXIT_OK
        from kgmm.cli.commands.init import run_init_config
        return run_init_config(args)

    parser.print_help()
    return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for kgmm CLI.

    Args:
        argv: Command line arguments (defaults to sys.argv[1:]).

    Returns:
        Exit code (0 for success, 1 for error, 2 for config error, 130 if interrupted).
    """
    parser = create_parser()
    args = parser.parse_args(argv)
    args.tags = _parse_tags(args.global_tag + (getattr(args, "tag", None) or []))

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    _configure_logging(args.verbose, args.quiet)

    try:
        return _dispatch(parser, args)

    except KeyboardInterrupt:
        print("\nOperation cancelled.", file=sys.stderr)
        return EXIT_INTERRUPTED

    except Exception as e:
        message = " ".join(str(e).split())
        print(f"error: {type(e).__name__}: {message}", file=sys.stderr)
        if args.verbose > 0:
            import traceback
            traceback.print_exc()
        return _exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
