"""Experiment reports and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np


class ExperimentError(Exception):
    """Raised when an experiment cannot be run with the given inputs."""

    pass


def plain(value: Any) -> Any:
    """Convert numpy scalars and arrays (also nested) to JSON-ready Python values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _flatten(prefix: str, value: Any, row: dict[str, Any]) -> None:
    if isinstance(value, dict):
        for key, inner in value.items():
            _flatten(f"{prefix}{key}.", inner, row)
        return
    name = prefix[:-1]
    if isinstance(value, list):
        row[name] = ";".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    elif isinstance(value, float):
        row[name] = repr(value)
    else:
        row[name] = value


@dataclass
class ExperimentReport:
    """Result of one experiment command.

    Attributes:
        config: Echo of the effective configuration (seed, kernel, ...).
        cells: One entry per evaluated cell: ``params`` plus value, mean/std or elapsed_ms.
        reference: Optional full-data reference entries.
    """

    config: dict[str, Any]
    cells: list[dict[str, Any]] = field(default_factory=list)
    reference: Optional[list[dict[str, Any]]] = None

    def add(self, params: dict[str, Any], **values: Any) -> None:
        self.cells.append({"params": plain(params), **plain(values)})

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"config": plain(self.config), "cells": self.cells}
        if self.reference is not None:
            data["reference"] = self.reference
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def rows(self) -> list[dict[str, Any]]:
        """Flatten cells into CSV rows; params become leading columns, other nesting is dotted."""
        rows = []
        for cell in self.cells:
            row: dict[str, Any] = {}
            for key, value in cell.items():
                _flatten("" if key == "params" else f"{key}.", value, row)
            rows.append(row)
        return rows

    def to_csv(self) -> str:
        rows = self.rows()
        if not rows:
            return ""
        fieldnames: list[str] = []
        for row in rows:
            fieldnames.extend(k for k in row if k not in fieldnames)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def write(self, directory: Path, stem: str, formats: tuple[str, ...] = ("json", "csv")) -> list[Path]:
        """Write the report as ``<stem>.json`` and/or ``<stem>.csv``.

        Returns:
            Paths written, in the order of ``formats``.

        Raises:
            ExperimentError: If a format is unknown or the directory is unwritable.
        """
        written = []
        try:
            directory.mkdir(parents=True, exist_ok=True)
            for fmt in formats:
                if fmt == "json":
                    content = self.to_json()
                elif fmt == "csv":
                    content = self.to_csv()
                else:
                    raise ExperimentError(f"Unknown report format '{fmt}'")
                path = directory / f"{stem}.{fmt}"
                path.write_text(content, encoding="utf-8")
                written.append(path)
        except OSError as e:
            raise ExperimentError(f"Cannot write report to {directory}: {e}") from e
        return written
