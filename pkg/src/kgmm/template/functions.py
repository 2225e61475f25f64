"""Template function registry for output path templates."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Optional


@dataclass
class TemplateContext:
    """Context for template evaluation.

    Attributes:
        command: Name of the running command (e.g. "sweep").
        gamma: RBF width of the run, if any.
        seed: Seed of the run.
        kernel: Canonical kernel description (e.g. "rbf:1.0").
        tags: Dictionary of tag key-value pairs.
    """

    command: Optional[str] = None
    gamma: Optional[float] = None
    seed: Optional[int] = None
    kernel: Optional[str] = None
    tags: dict[str, str] = field(default_factory=dict)


class FunctionRegistry:
    """Registry of template functions available during evaluation.

    - Run functions: command(), gamma(), seed(), kernel()
    - Tag functions: tag(name), tag_exist(name)
    - Utility functions: time_id(fmt)
    """

    def __init__(self, context: TemplateContext) -> None:
        self._context = context
        self._functions: dict[str, Callable[..., Any]] = {}
        self._cached_datetime: Optional[datetime] = None
        self._register_builtin_functions()

    def _register_builtin_functions(self) -> None:
        self._functions["command"] = self._command
        self._functions["gamma"] = self._gamma
        self._functions["seed"] = self._seed
        self._functions["kernel"] = self._kernel
        self._functions["tag"] = self._tag
        self._functions["tag_exist"] = self._tag_exist
        self._functions["time_id"] = self._time_id

    def get_functions(self) -> dict[str, Callable[..., Any]]:
        """Return dictionary of all registered functions."""
        return self._functions.copy()

    # --- Run Functions ---

    def _command(self) -> str:
        """Get the running command name.

        Raises:
            ValueError: If no command context available.
        """
        if self._context.command is None:
            raise ValueError("No command context available for command() function")
        return self._context.command

    def _gamma(self) -> str:
        """Get the RBF width as written by repr (e.g. "10.0").

        Raises:
            ValueError: If the run has no gamma.
        """
        if self._context.gamma is None:
            raise ValueError("No gamma context available for gamma() function")
        return repr(self._context.gamma)

    def _seed(self) -> str:
        if self._context.seed is None:
            raise ValueError("No seed context available for seed() function")
        return str(self._context.seed)

    def _kernel(self) -> str:
        """Get the kernel description with ':' replaced by '-' so it is path safe."""
        if self._context.kernel is None:
            raise ValueError("No kernel context available for kernel() function")
        return self._context.kernel.replace(":", "-")

    # --- Tag Functions ---

    def _tag(self, name: str) -> str:
        """Get tag value by name, empty string if the tag is absent or has no value."""
        if not isinstance(name, str):
            raise TypeError(f"tag() expects a string name, got {type(name).__name__}")
        return self._context.tags.get(name, "")

    def _tag_exist(self, name: str) -> bool:
        if not isinstance(name, str):
            raise TypeError(f"tag_exist() expects a string name, got {type(name).__name__}")
        return name in self._context.tags

    # --- Utility Functions ---

    def _time_id(self, fmt: str = "%Y%m%d-%H%M.%S") -> str:
        """Generate a datetime-based identifier string.

        The datetime is captured on first call and cached, so several calls in
        one template share a timestamp.

        Args:
            fmt: strftime format, default "%Y%m%d-%H%M.%S" (e.g. "20260120-2134.03").

        Returns:
            Formatted datetime string.
        """
        if self._cached_datetime is None:
            self._cached_datetime = datetime.now()
        return self._cached_datetime.strftime(fmt)


def create_function_registry(context: TemplateContext) -> dict[str, Callable[..., Any]]:
    """Create a function registry for template evaluation.

    Args:
        context: Template context of the run.

    Returns:
        Dictionary of functions to pass to simpleeval.
    """
    registry = FunctionRegistry(context)
    return registry.get_functions()
