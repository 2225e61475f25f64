"""Kernel Wasserstein distance between empirical Gaussians in an RKHS.

Only Gram matrices are ever formed; the feature-space mean m = Phi s and
covariance Sigma = Phi J J^T Phi^T stay implicit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from kgmm.kernel.core import (
    SPECTRAL_TOL,
    CenteringOperator,
    Dataset,
    KernelSpec,
    centering,
    cross_covariance_factor,
    gram,
    gram_blocks,
    nuclear_norm,
    product_spectrum,
)

logger = logging.getLogger(__name__)


class RkhsError(Exception):
    """Base exception for RKHS distance errors."""

    pass


class KernelSpecMismatchError(RkhsError):
    """Raised when two RKHS Gaussians use different kernels."""

    pass


class NegativeDistanceError(RkhsError):
    """Raised when a squared distance is negative beyond the clamping window."""

    pass


@dataclass(frozen=True, eq=False)
class RkhsGaussian:
    """Gaussian in the feature space of a kernel, defined by a sample.

    Attributes:
        data: Sample whose feature-space image defines the mean and covariance.
        spec: Kernel inducing the feature space.
    """

    data: Dataset
    spec: KernelSpec

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def centering(self) -> CenteringOperator:
        return centering(self.data.n)

    def same_as(self, other: RkhsGaussian) -> bool:
        return self.spec == other.spec and (
            self.data is other.data or np.array_equal(self.data.points, other.data.points)
        )


@dataclass(frozen=True)
class GramBlocks:
    """Gram blocks K00, K10 (K01 = K10^T) and K11 of one pair."""

    k00: NDArray[np.float64]
    k10: NDArray[np.float64]
    k11: NDArray[np.float64]

    @classmethod
    def build(cls, a: RkhsGaussian, b: RkhsGaussian, workers: int = 1) -> GramBlocks:
        _check_same_spec(a, b)
        k00, k10, k11 = gram_blocks(a.data, b.data, a.spec, workers=workers)
        return cls(k00, k10, k11)

    @property
    def mmd_squared(self) -> float:
        return float(self.k00.mean() - 2.0 * self.k10.mean() + self.k11.mean())

    @property
    def trace0(self) -> float:
        return _centered_trace(self.k00)

    @property
    def trace1(self) -> float:
        return _centered_trace(self.k11)

    @property
    def scale(self) -> float:
        """Magnitude used for the clamping window of squared distances."""
        return abs(float(self.k00.mean())) + abs(float(self.k11.mean())) + abs(self.trace0) + abs(self.trace1)

    def cross_nuclear_norm(self) -> float:
        """tr((Sigma1 Sigma0)^1/2) as the nuclear norm of J1^T K10 J0."""
        j0 = centering(self.k00.shape[0])
        j1 = centering(self.k11.shape[0])
        return nuclear_norm(cross_covariance_factor(self.k10, j0, j1))

    def spectrum(self) -> NDArray[np.float64]:
        """Nonzero eigenvalues of Sigma0 Sigma1."""
        return product_spectrum(
            self.k10, centering(self.k00.shape[0]), centering(self.k11.shape[0])
        )


def _check_same_spec(a: RkhsGaussian, b: RkhsGaussian) -> None:
    if a.spec != b.spec:
        raise KernelSpecMismatchError(
            f"Kernel specs differ: {a.spec.describe()} vs {b.spec.describe()}"
        )


def _centered_trace(k: NDArray[np.float64]) -> float:
    """tr(J J^T K) = (tr K - sum(K) / n) / n."""
    n = k.shape[0]
    return float((np.trace(k) - k.sum() / n) / n)


def _trace_scale(k: NDArray[np.float64]) -> float:
    n = k.shape[0]
    return abs(float(np.trace(k))) / n + abs(float(k.mean()))


def clamp_nonnegative(value: float, scale: float, what: str) -> float:
    """Clamp values in [-tol * scale, 0) to zero; reject anything below.

    Raises:
        NegativeDistanceError: If value < -tol * scale.
    """
    if value >= 0.0:
        return value
    if value < -SPECTRAL_TOL * max(scale, 1.0):
        raise NegativeDistanceError(f"{what} evaluated to negative value {value:.3e}")
    logger.debug("clamped %s from %.3e to 0", what, value)
    return 0.0


def mmd_squared(a: RkhsGaussian, b: RkhsGaussian) -> float:
    """Squared maximum mean discrepancy ||m0 - m1||^2 (biased V-statistic).

    Raises:
        KernelSpecMismatchError: If the kernels differ.
    """
    _check_same_spec(a, b)
    if a.same_as(b):
        return 0.0
    k00 = gram(a.data, a.data, a.spec)
    k11 = gram(b.data, b.data, b.spec)
    k10 = gram(b.data, a.data, a.spec)
    value = float(k00.mean() - 2.0 * k10.mean() + k11.mean())
    return clamp_nonnegative(value, abs(float(k00.mean())) + abs(float(k11.mean())), "MMD^2")


def covariance_trace(a: RkhsGaussian) -> float:
    """tr(J J^T K), the total biased variance of the feature embedding.

    Raises:
        NegativeDistanceError: If the Gram matrix yields a trace below -tol * scale.
    """
    k = gram(a.data, a.data, a.spec)
    return clamp_nonnegative(_centered_trace(k), _trace_scale(k), "tr Sigma")


def kw2_squared(a: RkhsGaussian, b: RkhsGaussian, workers: int = 1) -> float:
    """Squared kernel Wasserstein distance.

    MMD^2 + tr(J0 J0^T K00) + tr(J1 J1^T K11) - 2 ||J1^T K10 J0||_*.

    Args:
        a: First RKHS Gaussian.
        b: Second RKHS Gaussian.
        workers: Threads used for the Gram blocks.

    Returns:
        Nonnegative squared distance.

    Raises:
        KernelSpecMismatchError: If the kernels differ.
        NegativeDistanceError: If the value is negative beyond tolerance.
    """
    _check_same_spec(a, b)
    if a.same_as(b):
        return 0.0
    blocks = GramBlocks.build(a, b, workers=workers)
    value = (
        blocks.mmd_squared
        + blocks.trace0
        + blocks.trace1
        - 2.0 * blocks.cross_nuclear_norm()
    )
    return clamp_nonnegative(value, blocks.scale, "KW2^2")


def kw2(a: RkhsGaussian, b: RkhsGaussian, workers: int = 1) -> float:
    """Kernel Wasserstein distance."""
    return float(np.sqrt(kw2_squared(a, b, workers=workers)))
