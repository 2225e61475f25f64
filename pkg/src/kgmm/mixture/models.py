"""Gaussian mixtures in input space and in an RKHS."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from kgmm.gaussian.closed_form import Gaussian
from kgmm.kernel.core import Dataset, DimensionMismatchError, KernelSpec
from kgmm.rkhs.distance import RkhsGaussian

WEIGHT_TOL = 1e-9


class MixtureError(Exception):
    """Base exception for mixture errors."""

    pass


class EmptyGroupError(MixtureError):
    """Raised when a mixture component has no points."""

    pass


def _weights(values: ArrayLike, count: int) -> NDArray[np.float64]:
    w = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if w.shape != (count,):
        raise MixtureError(f"Expected {count} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise MixtureError("Mixture weights must be finite and nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_TOL:
        raise MixtureError(f"Mixture weights sum to {total!r}, expected 1")
    return np.asarray(w / total)


def _groups(dataset: Dataset, labels: Optional[Sequence[int]]) -> list[Dataset]:
    if dataset.labels is None:
        raise MixtureError("Dataset has no labels; mixture components are taken from labels")
    if labels is None:
        return dataset.groups()
    present = set(dataset.label_values)
    for value in labels:
        if value not in present:
            raise EmptyGroupError(f"Component with label {value} has no points")
    return [dataset.subsample(np.flatnonzero(dataset.labels == value)) for value in labels]


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Finite mixture of input-space Gaussians.

    Attributes:
        components: Gaussians of a common dimension.
        weights: Probability vector, one entry per component.
    """

    components: tuple[Gaussian, ...]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        components = tuple(self.components)
        if not components:
            raise MixtureError("A mixture needs at least one component")
        dims = {g.dim for g in components}
        if len(dims) != 1:
            raise DimensionMismatchError(f"Mixture components have dimensions {sorted(dims)}")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "weights", _weights(self.weights, len(components)))

    @classmethod
    def of(cls, components: Sequence[Gaussian], weights: ArrayLike) -> GaussianMixture:
        return cls(tuple(components), np.asarray(weights, dtype=np.float64))

    @classmethod
    def from_dataset(
        cls,
        dataset: Dataset,
        weights: ArrayLike,
        labels: Optional[Sequence[int]] = None,
    ) -> GaussianMixture:
        """Fit each labeled group with its biased empirical moments.

        Components follow ``labels`` when given, otherwise the ascending labels
        present in the dataset.

        Raises:
            MixtureError: If the dataset is unlabeled or the weights are invalid.
        """
        return cls.of([Gaussian.fit(group) for group in _groups(dataset, labels)], weights)

    @property
    def size(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return self.components[0].dim


@dataclass(frozen=True, eq=False)
class KernelMixture:
    """Mixture whose components are feature-space Gaussians of labeled groups.

    Attributes:
        groups: One RKHS Gaussian per component.
        weights: Probability vector, one entry per component.
    """

    groups: tuple[RkhsGaussian, ...]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        groups = tuple(self.groups)
        if not groups:
            raise MixtureError("A mixture needs at least one component")
        specs = {g.spec for g in groups}
        if len(specs) != 1:
            raise MixtureError("All components of a kernel mixture must share one kernel")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "weights", _weights(self.weights, len(groups)))

    @classmethod
    def from_dataset(
        cls,
        dataset: Dataset,
        spec: KernelSpec,
        weights: ArrayLike,
        labels: Optional[Sequence[int]] = None,
    ) -> KernelMixture:
        """One component per label of a labeled dataset, in ascending label order.

        Raises:
            EmptyGroupError: If a requested label has no points.
            MixtureError: If the dataset is unlabeled or the weights are invalid.
        """
        groups = tuple(RkhsGaussian(group, spec) for group in _groups(dataset, labels))
        return cls(groups, np.asarray(weights, dtype=np.float64))

    @property
    def spec(self) -> KernelSpec:
        return self.groups[0].spec

    @property
    def size(self) -> int:
        return len(self.groups)
