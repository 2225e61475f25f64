"""Output directory resolution from the path template."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from kgmm.config.validator import Config
from kgmm.kernel.core import KernelFamily, KernelSpec
from kgmm.template.evaluator import TemplateError, evaluate_template
from kgmm.template.functions import TemplateContext


class ResolverError(Exception):
    """Raised when path resolution fails."""

    pass


def _expand_home(path: str) -> str:
    if path.startswith("~"):
        return str(Path(path).expanduser())
    return path


def build_context(
    config: Config,
    command: str,
    tags: Optional[dict[str, str]] = None,
    kernel: Optional[KernelSpec] = None,
) -> TemplateContext:
    """Template context of one run; gamma() is only defined for RBF kernels."""
    spec = kernel or config.kernel
    return TemplateContext(
        command=command,
        gamma=spec.gamma if spec.family is KernelFamily.RBF else None,
        seed=config.seed,
        kernel=spec.describe(),
        tags=dict(tags or {}),
    )


def resolve_output_dir(
    config: Config,
    command: str,
    tags: Optional[dict[str, str]] = None,
    kernel: Optional[KernelSpec] = None,
    out: Optional[Path] = None,
) -> Path:
    """Resolve the directory a command writes into.

    Args:
        config: Validated configuration.
        command: Running command name.
        tags: Tags from --tag.
        kernel: Kernel of the run when it differs from the configured one.
        out: Explicit --out directory, which bypasses the template.

    Returns:
        Absolute output directory (not created).

    Raises:
        ResolverError: If the template cannot be evaluated.
    """
    if out is not None:
        return out.expanduser().resolve()

    context = build_context(config, command, tags, kernel)
    try:
        path_str = evaluate_template(config.output, context)
    except TemplateError as e:
        raise ResolverError(f"Error evaluating output path template: {e}") from e

    return Path(_expand_home(path_str)).resolve()
