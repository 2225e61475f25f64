"""CSV ingestion and export of datasets."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from kgmm.kernel.core import Dataset, KernelError

LABEL_COLUMN = "label"


class DatasetFormatError(Exception):
    """Raised when a dataset file cannot be read or written."""

    pass


def dataset_to_csv(dataset: Dataset) -> str:
    """Serialize a dataset: header ``x0..x{d-1}[,label]``, repr floats, LF endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = [f"x{k}" for k in range(dataset.dim)]
    if dataset.labels is not None:
        header.append(LABEL_COLUMN)
    writer.writerow(header)
    for i in range(dataset.n):
        row = [repr(float(v)) for v in dataset.points[i]]
        if dataset.labels is not None:
            row.append(str(int(dataset.labels[i])))
        writer.writerow(row)
    return buffer.getvalue()


def write_dataset(dataset: Dataset, path: Path) -> Path:
    """Write a dataset to CSV, creating parent directories.

    Raises:
        DatasetFormatError: If the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dataset_to_csv(dataset), encoding="utf-8", newline="")
    except OSError as e:
        raise DatasetFormatError(f"Cannot write dataset {path}: {e}") from e
    return path


def parse_dataset(text: str, source: str = "<string>") -> Dataset:
    """Parse CSV text with a header of numeric feature columns and an optional ``label`` column.

    Raises:
        DatasetFormatError: If the header is missing, a value is not numeric or rows are ragged.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DatasetFormatError(f"{source}: empty dataset file")
    header = [cell.strip() for cell in rows[0]]
    try:
        [float(cell) for cell in header]
    except ValueError:
        pass
    else:
        raise DatasetFormatError(f"{source}: header row is required")

    label_index = header.index(LABEL_COLUMN) if LABEL_COLUMN in header else None
    feature_index = [k for k in range(len(header)) if k != label_index]
    if not feature_index:
        raise DatasetFormatError(f"{source}: no feature columns")
    if len(rows) < 2:
        raise DatasetFormatError(f"{source}: no data rows")

    points = np.empty((len(rows) - 1, len(feature_index)))
    labels = np.empty(len(rows) - 1, dtype=np.int64) if label_index is not None else None
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != len(header):
            raise DatasetFormatError(
                f"{source}:{line}: expected {len(header)} columns, got {len(row)}"
            )
        try:
            points[i] = [float(row[k]) for k in feature_index]
            if labels is not None and label_index is not None:
                labels[i] = int(row[label_index])
        except ValueError as e:
            raise DatasetFormatError(f"{source}:{line}: {e}") from e

    try:
        return Dataset(points, labels)
    except KernelError as e:
        raise DatasetFormatError(f"{source}: {e}") from e


def read_dataset(path: Path) -> Dataset:
    """Load a dataset CSV.

    Raises:
        DatasetFormatError: If the file is missing or malformed.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetFormatError(f"Cannot read dataset {path}: {e}") from e
    return parse_dataset(text, str(path))
