"""Closed-form W2 distance and displacement interpolation between Gaussians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from kgmm.kernel.core import (
    SPECTRAL_TOL,
    Dataset,
    DimensionMismatchError,
    KernelError,
    NonFiniteInputError,
    nuclear_norm,
    psd_eigenvalues,
    psd_sqrt,
)


class GaussianError(Exception):
    """Base exception for Gaussian closed-form errors."""

    pass


class SingularCovarianceError(GaussianError):
    """Raised when an operation needs a strictly positive definite covariance."""

    pass


@dataclass(frozen=True, eq=False)
class Gaussian:
    """Gaussian measure in input space.

    Attributes:
        mean: Length-d mean vector.
        cov: (d, d) symmetric positive semi-definite covariance.
    """

    mean: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatchError(
                f"Covariance shape {cov.shape} does not match mean of length {mean.size}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise NonFiniteInputError("Gaussian parameters contain non-finite values")
        try:
            psd_eigenvalues(cov)
        except KernelError as e:
            raise GaussianError(f"Invalid covariance: {e}") from e
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", (cov + cov.T) / 2.0)

    @classmethod
    def from_params(cls, mean: ArrayLike, cov: ArrayLike) -> Gaussian:
        return cls(np.asarray(mean, dtype=np.float64), np.asarray(cov, dtype=np.float64))

    @classmethod
    def fit(cls, data: Dataset) -> Gaussian:
        """Gaussian with the biased empirical moments of a sample."""
        return cls(data.mean(), data.covariance())

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    def same_as(self, other: Gaussian) -> bool:
        return bool(np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov))


def _check_same_dim(g0: Gaussian, g1: Gaussian) -> None:
    if g0.dim != g1.dim:
        raise DimensionMismatchError(
            f"Gaussians must share dimension, got {g0.dim} and {g1.dim}"
        )


def w2_squared(g0: Gaussian, g1: Gaussian) -> float:
    """Squared 2-Wasserstein distance between two Gaussians.

    The cross term tr((C0^1/2 C1 C0^1/2)^1/2) is evaluated as the nuclear norm
    of C1^1/2 C0^1/2, which has the same singular values.

    Args:
        g0: First Gaussian.
        g1: Second Gaussian.

    Returns:
        Nonnegative squared distance.

    Raises:
        DimensionMismatchError: If dimensions differ.
    """
    _check_same_dim(g0, g1)
    if g0.same_as(g1):
        return 0.0

    mean_term = float(np.sum((g0.mean - g1.mean) ** 2))
    cross = nuclear_norm(psd_sqrt(g1.cov) @ psd_sqrt(g0.cov))
    trace_term = float(np.trace(g0.cov) + np.trace(g1.cov)) - 2.0 * cross
    value = mean_term + trace_term

    scale = mean_term + float(np.trace(g0.cov) + np.trace(g1.cov))
    if value < 0.0:
        if value < -SPECTRAL_TOL * max(scale, 1.0):
            raise GaussianError(f"W2 evaluated to negative value {value:.3e}")
        return 0.0
    return value


def w2(g0: Gaussian, g1: Gaussian) -> float:
    """2-Wasserstein distance between two Gaussians."""
    return float(np.sqrt(w2_squared(g0, g1)))


def _inverse_sqrt(matrix: NDArray[np.float64]) -> NDArray[np.float64]:
    """Inverse square root of a strictly positive definite matrix."""
    sym = (matrix + matrix.T) / 2.0
    eigvals, eigvecs = linalg.eigh(sym)
    scale = float(np.max(np.abs(eigvals), initial=0.0))
    if scale == 0.0 or eigvals[0] <= SPECTRAL_TOL * scale:
        raise SingularCovarianceError(
            "Displacement interpolation requires non-degenerate covariances"
        )
    return np.asarray((eigvecs / np.sqrt(eigvals)) @ eigvecs.T)


def transport_matrix(c0: NDArray[np.float64], c1: NDArray[np.float64]) -> NDArray[np.float64]:
    """Q = C1^1/2 (C1^1/2 C0 C1^1/2)^-1/2 C1^1/2, the optimal linear map from C0 to C1."""
    for cov in (c0, c1):
        _inverse_sqrt(cov)
    root1 = psd_sqrt(c1)
    q = root1 @ _inverse_sqrt(root1 @ c0 @ root1) @ root1
    return np.asarray((q + q.T) / 2.0)


def interpolate(g0: Gaussian, g1: Gaussian, t: float) -> Gaussian:
    """Point at time t on the W2 geodesic between two non-degenerate Gaussians.

    Args:
        g0: Start of the geodesic.
        g1: End of the geodesic.
        t: Time in [0, 1].

    Returns:
        Gaussian with mean (1-t) theta0 + t theta1 and covariance
        ((1-t) I + t Q) C0 ((1-t) I + t Q).

    Raises:
        SingularCovarianceError: If either covariance is degenerate.
        GaussianError: If t lies outside [0, 1].
    """
    _check_same_dim(g0, g1)
    if not 0.0 <= t <= 1.0:
        raise GaussianError(f"Interpolation time must lie in [0, 1], got {t}")

    q = transport_matrix(g0.cov, g1.cov)
    step = (1.0 - t) * np.eye(g0.dim) + t * q
    cov = step @ g0.cov @ step
    mean = (1.0 - t) * g0.mean + t * g1.mean
    return Gaussian(mean, (cov + cov.T) / 2.0)
