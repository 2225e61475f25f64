"""Entropy-regularized optimal transport between Gaussians.

Two closed forms of the regularized squared distance are provided: the
epsilon form (KL penalty of strength epsilon) and the sigma form (Gaussian
noise of variance sigma^2). They coincide when epsilon = 2 sigma^2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from kgmm.gaussian.closed_form import Gaussian, GaussianError, _check_same_dim
from kgmm.kernel.core import psd_eigenvalues, psd_sqrt

logger = logging.getLogger(__name__)

# Contribution 1 - log 2 of a zero eigenvalue to the spectral reduction.
ZERO_MODE_CONSTANT = 1.0 - float(np.log(2.0))


class ConvergenceError(GaussianError):
    """Raised when the barycenter fixed point does not converge."""

    def __init__(self, message: str, last: Gaussian, residual: float) -> None:
        super().__init__(message)
        self.last = last
        self.residual = residual


@dataclass(frozen=True)
class EntropicParams:
    """Regularization strength, given either as epsilon or as sigma^2.

    Attributes:
        epsilon: KL penalty strength (epsilon form).
        sigma2: Noise variance (sigma form).
    """

    epsilon: Optional[float] = None
    sigma2: Optional[float] = None

    def __post_init__(self) -> None:
        if (self.epsilon is None) == (self.sigma2 is None):
            raise GaussianError("Exactly one of epsilon and sigma2 must be set")
        value = self.epsilon if self.epsilon is not None else self.sigma2
        if value is None or not (value > 0 and np.isfinite(value)):
            raise GaussianError(f"Regularization must be a positive real, got {value}")

    @property
    def as_epsilon(self) -> float:
        """Equivalent epsilon (epsilon = 2 sigma^2)."""
        if self.epsilon is not None:
            return self.epsilon
        assert self.sigma2 is not None
        return 2.0 * self.sigma2


def _check_positive(value: float, name: str) -> None:
    if not (value > 0 and np.isfinite(value)):
        raise GaussianError(f"{name} must be a positive real, got {value}")


def covariance_product_spectrum(c0: NDArray[np.float64], c1: NDArray[np.float64]) -> NDArray[np.float64]:
    """All d eigenvalues of C0 C1, through the symmetric surrogate C0^1/2 C1 C0^1/2."""
    root0 = psd_sqrt(c0)
    return psd_eigenvalues(root0 @ c1 @ root0)


def entropic_cross_term(spectrum: ArrayLike, epsilon: float, dim: int) -> float:
    """Spectral form of (epsilon/2)(tr M - log det M + dim log 2 - 2 dim).

    ``spectrum`` holds the nonzero eigenvalues of the covariance product; the
    remaining ``dim - len(spectrum)`` eigenvalues are zero.

    Raises:
        GaussianError: If epsilon is not positive or dim is below the spectrum length.
    """
    _check_positive(epsilon, "epsilon")
    lam = np.clip(np.asarray(spectrum, dtype=np.float64), 0.0, None)
    if dim < lam.size:
        raise GaussianError(f"Dimension {dim} is smaller than the {lam.size} retained eigenvalues")
    root = np.sqrt(1.0 + (16.0 / epsilon**2) * lam)
    # Zero eigenvalues give root = 1 and cancel against the constant.
    per_mode = root - np.log1p(root) - ZERO_MODE_CONSTANT
    return float(epsilon / 2.0 * np.sum(per_mode))


def entropic_w2_squared(g0: Gaussian, g1: Gaussian, epsilon: float) -> float:
    """Entropy-regularized squared W2 (epsilon form).

    ||theta0 - theta1||^2 + tr C0 + tr C1 - B with
    B = (epsilon/2)(tr M - log det M + d log 2 - 2d) and
    M = I + (I + (16/epsilon^2) C0 C1)^1/2.

    Raises:
        GaussianError: If epsilon <= 0.
    """
    _check_same_dim(g0, g1)
    _check_positive(epsilon, "epsilon")
    d = g0.dim
    lam = covariance_product_spectrum(g0.cov, g1.cov)
    m_eigs = 1.0 + np.sqrt(1.0 + (16.0 / epsilon**2) * lam)
    b = epsilon / 2.0 * (
        float(np.sum(m_eigs)) - float(np.sum(np.log(m_eigs))) + d * np.log(2.0) - 2.0 * d
    )
    mean_term = float(np.sum((g0.mean - g1.mean) ** 2))
    return mean_term + float(np.trace(g0.cov) + np.trace(g1.cov)) - b


def entropic_w2_squared_sigma(g0: Gaussian, g1: Gaussian, sigma2: float) -> float:
    """Entropy-regularized squared W2 (sigma form).

    ||theta0 - theta1||^2 + tr C0 + tr C1 - F with
    F = tr D - d sigma^2 (1 - log 2 sigma^2) - sigma^2 log det(D + sigma^2 I) and
    D = (4 C0 C1 + sigma^4 I)^1/2.

    Raises:
        GaussianError: If sigma2 <= 0.
    """
    _check_same_dim(g0, g1)
    _check_positive(sigma2, "sigma2")
    d = g0.dim
    lam = covariance_product_spectrum(g0.cov, g1.cov)
    d_eigs = np.sqrt(4.0 * lam + sigma2**2)
    f = (
        float(np.sum(d_eigs))
        - d * sigma2 * (1.0 - np.log(2.0 * sigma2))
        - sigma2 * float(np.sum(np.log(d_eigs + sigma2)))
    )
    mean_term = float(np.sum((g0.mean - g1.mean) ** 2))
    return mean_term + float(np.trace(g0.cov) + np.trace(g1.cov)) - f


def _regularized_root(product: NDArray[np.float64], shift: float) -> NDArray[np.float64]:
    """Principal square root of shift * I + product (eigenvalues are >= shift > 0)."""
    root = linalg.sqrtm(shift * np.eye(product.shape[0]) + product)
    return np.asarray(np.real(root))


def entropic_interpolate(g0: Gaussian, g1: Gaussian, t: float, epsilon: float) -> Gaussian:
    """Entropic displacement interpolation.

    The mean follows (1 - t) theta0 + t theta1 so that t = 0 gives g0 and
    t = 1 gives g1. The covariance is
    (1-t)^2 C0 + t^2 C1 + t(1-t)[(e^2/16 I + C0 C1)^1/2 + (e^2/16 I + C1 C0)^1/2].

    Raises:
        GaussianError: If t lies outside [0, 1] or epsilon <= 0.
    """
    _check_same_dim(g0, g1)
    _check_positive(epsilon, "epsilon")
    if not 0.0 <= t <= 1.0:
        raise GaussianError(f"Interpolation time must lie in [0, 1], got {t}")

    shift = epsilon**2 / 16.0
    cross = _regularized_root(g0.cov @ g1.cov, shift) + _regularized_root(g1.cov @ g0.cov, shift)
    cov = (1.0 - t) ** 2 * g0.cov + t**2 * g1.cov + t * (1.0 - t) * cross
    mean = (1.0 - t) * g0.mean + t * g1.mean
    return Gaussian(mean, (cov + cov.T) / 2.0)


@dataclass(frozen=True)
class BarycenterResult:
    """Outcome of the entropic barycenter iteration.

    Attributes:
        gaussian: The barycenter.
        iterations: Fixed-point iterations performed.
        residual: Fixed-point gap ||F(C) - C||_F of the returned covariance,
            where F is the undamped barycenter map.
    """

    gaussian: Gaussian
    iterations: int
    residual: float


def _barycenter_map(
    cov: NDArray[np.float64],
    covs: Sequence[NDArray[np.float64]],
    weights: NDArray[np.float64],
    epsilon: float,
) -> NDArray[np.float64]:
    d = cov.shape[0]
    root = psd_sqrt(cov)
    total = np.zeros((d, d))
    for weight, ci in zip(weights, covs):
        inner = np.eye(d) + (16.0 / epsilon**2) * (root @ ci @ root)
        total += weight * (-np.eye(d) + psd_sqrt((inner + inner.T) / 2.0))
    result = epsilon / 4.0 * total
    return np.asarray((result + result.T) / 2.0)


def entropic_barycenter(
    gaussians: Sequence[Gaussian],
    weights: ArrayLike,
    epsilon: float,
    max_iter: int = 500,
    tol: float = 1e-10,
    damping: float = 0.0,
) -> BarycenterResult:
    """Entropic barycenter of several Gaussians by fixed-point iteration.

    Iterates C <- (eps/4) sum_i w_i (-I + (I + (16/eps^2) C^1/2 C_i C^1/2)^1/2)
    from C = sum_i w_i C_i until ||F(C) - C||_F is at most tol. Damping
    slows the update but does not enter the stopping rule.

    Args:
        gaussians: Gaussians of a common dimension.
        weights: Probability vector, one weight per Gaussian.
        epsilon: Regularization strength.
        max_iter: Iteration cap.
        tol: Convergence threshold on the fixed-point gap.
        damping: Fraction of the previous iterate kept in each update, in [0, 1).

    Returns:
        BarycenterResult with the barycenter and convergence data.

    Raises:
        GaussianError: On invalid weights, dimensions or parameters.
        ConvergenceError: If max_iter is reached before convergence.
    """
    _check_positive(epsilon, "epsilon")
    if not gaussians:
        raise GaussianError("Barycenter needs at least one Gaussian")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(gaussians),):
        raise GaussianError(f"Expected {len(gaussians)} weights, got shape {w.shape}")
    if np.any(w < 0) or abs(float(w.sum()) - 1.0) > 1e-9:
        raise GaussianError("Barycenter weights must be nonnegative and sum to 1")
    if not 0.0 <= damping < 1.0:
        raise GaussianError(f"Damping must lie in [0, 1), got {damping}")
    for g in gaussians[1:]:
        _check_same_dim(gaussians[0], g)

    mean = np.sum([wi * g.mean for wi, g in zip(w, gaussians)], axis=0)
    covs = [g.cov for g in gaussians]
    cov = np.sum([wi * c for wi, c in zip(w, covs)], axis=0)

    residual = float("inf")
    measured = cov
    for iteration in range(1, max_iter + 1):
        mapped = _barycenter_map(cov, covs, w, epsilon)
        residual = float(np.linalg.norm(mapped - cov, "fro"))
        logger.debug("barycenter iteration %d residual %.3e", iteration, residual)
        if residual <= tol:
            return BarycenterResult(Gaussian(mean, cov), iteration, residual)
        measured = cov
        cov = (1.0 - damping) * mapped + damping * cov

    logger.warning("Entropic barycenter stopped after %d iterations (residual %.3e)", max_iter, residual)
    raise ConvergenceError(
        f"Entropic barycenter did not converge in {max_iter} iterations "
        f"(residual {residual:.3e} > {tol:g})",
        Gaussian(mean, measured),
        residual,
    )
