"""Output path templates: literal text with embedded function calls."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Union

from simpleeval import EvalWithCompoundTypes, FunctionNotDefined, NameNotDefined

from kgmm.template.functions import TemplateContext, create_function_registry


class TemplateError(Exception):
    """Base exception for template-related errors."""

    pass


class FunctionTypeError(TemplateError):
    """Raised when function arguments have wrong types."""

    pass


class ContextError(TemplateError):
    """Raised when the run context lacks a value a function needs."""

    pass


class StrictSimpleEval(EvalWithCompoundTypes):  # type: ignore[misc]
    """simpleeval restricted to the registered functions; no free names."""

    def __init__(self, functions: dict[str, Callable[..., Any]]) -> None:
        super().__init__(functions=functions, names={})


# One token per match: a call without nested parentheses, or an escape.
_TOKEN = re.compile(r"(?P<call>[A-Za-z_]\w*\s*\([^()]*\))|(?P<open>\(\()|(?P<close>\)\))")


@dataclass(frozen=True)
class _Call:
    expression: str


Segment = Union[str, _Call]


@dataclass(frozen=True)
class PathTemplate:
    """A parsed template, rendered once per run context.

    Attributes:
        source: Template text as configured.
        segments: Literal strings and function calls in order.
    """

    source: str
    segments: tuple[Segment, ...]

    @classmethod
    def parse(cls, source: str) -> PathTemplate:
        segments: list[Segment] = []
        text: list[str] = []
        pos = 0
        for match in _TOKEN.finditer(source):
            text.append(source[pos : match.start()])
            pos = match.end()
            if match.group("call"):
                if text:
                    segments.append("".join(text))
                    text = []
                segments.append(_Call(match.group("call")))
            else:
                text.append("(" if match.group("open") else ")")
        text.append(source[pos:])
        literal = "".join(text)
        if literal:
            segments.append(literal)
        return cls(source, tuple(s for s in segments if s != ""))

    @property
    def calls(self) -> list[str]:
        return [s.expression for s in self.segments if isinstance(s, _Call)]

    def render(self, context: TemplateContext) -> str:
        """Substitute every call with its value under ``context``.

        Raises:
            TemplateError: If a function is unknown or evaluation fails.
            FunctionTypeError: If function arguments are invalid.
            ContextError: If the context lacks a required value.
        """
        evaluator = StrictSimpleEval(create_function_registry(context))
        parts = []
        for segment in self.segments:
            if isinstance(segment, str):
                parts.append(segment)
            else:
                parts.append(_call(evaluator, segment.expression))
        return "".join(parts)


def _call(evaluator: StrictSimpleEval, expression: str) -> str:
    try:
        result = evaluator.eval(expression)
    except FunctionNotDefined as e:
        raise TemplateError(f"Unknown function in template: {e}") from e
    except NameNotDefined as e:
        raise TemplateError(f"Unknown name in template: {e}") from e
    except ValueError as e:
        raise ContextError(str(e)) from e
    except TypeError as e:
        raise FunctionTypeError(f"Invalid argument types in {expression}: {e}") from e
    except Exception as e:
        raise TemplateError(f"Template evaluation failed at {expression}: {e}") from e
    return result if isinstance(result, str) else str(result)


def evaluate_template(template: str, context: TemplateContext) -> str:
    """Evaluate an output path template.

    Template syntax:
    - Function calls: command(), gamma(), tag("study")
    - Escaped parentheses: (( -> (, )) -> )
    - Static text: passed through as-is

    Args:
        template: Template string to evaluate.
        context: Template context of the run.

    Returns:
        Evaluated template string.

    Raises:
        TemplateError: If evaluation fails.
        FunctionTypeError: If function arguments are invalid.
        ContextError: If required context is missing.
    """
    return PathTemplate.parse(template).render(context)
