"""Seeded generation of labeled Gaussian datasets."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from kgmm.experiments.report import ExperimentError
from kgmm.kernel.core import Dataset

logger = logging.getLogger(__name__)

DEFAULT_COUNT = 500
DEFAULT_COV_SCALE = 0.4


@dataclass(frozen=True, eq=False)
class ComponentSpec:
    """One Gaussian component of a generated dataset.

    Attributes:
        mean: Component mean.
        cov: Component covariance.
        count: Number of points drawn.
    """

    mean: NDArray[np.float64]
    cov: NDArray[np.float64]
    count: int = DEFAULT_COUNT

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if cov.shape != (mean.size, mean.size):
            raise ExperimentError(
                f"Component covariance shape {cov.shape} does not match mean of length {mean.size}"
            )
        if self.count < 1:
            raise ExperimentError(f"Component count must be >= 1, got {self.count}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def isotropic(cls, mean: ArrayLike, scale: float = DEFAULT_COV_SCALE, count: int = DEFAULT_COUNT) -> ComponentSpec:
        m = np.atleast_1d(np.asarray(mean, dtype=np.float64))
        return cls(m, scale * np.eye(m.size), count)

    def to_dict(self) -> dict[str, object]:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist(), "count": self.count}


@dataclass(frozen=True)
class DatasetSpec:
    """Components of a generated dataset; labels are the component indices."""

    components: tuple[ComponentSpec, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ExperimentError("A dataset needs at least one component")
        dims = {c.mean.size for c in self.components}
        if len(dims) != 1:
            raise ExperimentError(f"Components have different dimensions {sorted(dims)}")

    @classmethod
    def of(cls, components: Sequence[ComponentSpec]) -> DatasetSpec:
        return cls(tuple(components))

    @property
    def size(self) -> int:
        return sum(c.count for c in self.components)

    def to_dict(self) -> dict[str, object]:
        return {"components": [c.to_dict() for c in self.components]}


# Two well separated components per dataset, 500 points each, covariance 0.4 I.
BUILTIN_DATASETS: dict[str, DatasetSpec] = {
    "dataset1": DatasetSpec.of([ComponentSpec.isotropic((-2.0, 0.0)), ComponentSpec.isotropic((2.0, 0.0))]),
    "dataset2": DatasetSpec.of([ComponentSpec.isotropic((-2.0, 2.0)), ComponentSpec.isotropic((2.0, 2.0))]),
    "dataset3": DatasetSpec.of([ComponentSpec.isotropic((0.0, -2.0)), ComponentSpec.isotropic((0.0, 2.0))]),
}


def generate(spec: DatasetSpec, seed: Optional[int] = None, rng: Optional[np.random.Generator] = None) -> Dataset:
    """Draw a labeled dataset, component blocks in order.

    Args:
        spec: Components to draw.
        seed: Seed for a fresh PCG64 generator (ignored when rng is given).
        rng: Generator to draw from.

    Returns:
        Dataset with labels 0 .. k-1.
    """
    generator = rng if rng is not None else np.random.default_rng(seed)
    blocks = []
    labels = []
    for label, component in enumerate(spec.components):
        blocks.append(generator.multivariate_normal(component.mean, component.cov, size=component.count))
        labels.append(np.full(component.count, label, dtype=np.int64))
    logger.debug("generated %d points in %d components", spec.size, len(spec.components))
    return Dataset(np.vstack(blocks), np.concatenate(labels))
