"""Entropy-regularized kernel Wasserstein distances.

Both closed forms reduce the regularized trace/log-det term to the nonzero
eigenvalues of Sigma0 Sigma1 (``product_spectrum``) padded with zeros up to
the ambient dimension l. Each zero eigenvalue contributes nothing, so the
value does not depend on l as long as l covers the retained spectrum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from kgmm.gaussian.closed_form import GaussianError
from kgmm.gaussian.entropic import entropic_cross_term
from kgmm.rkhs.distance import GramBlocks, RkhsError, RkhsGaussian, clamp_nonnegative

logger = logging.getLogger(__name__)


class AmbientDimensionError(RkhsError):
    """Raised when an ambient dimension policy is malformed or too small."""

    pass


class AmbientPolicy(str, Enum):
    """How the ambient RKHS dimension l is chosen."""

    RANK = "rank"
    SPAN = "span"
    FIXED = "fixed"


@dataclass(frozen=True)
class AmbientDimension:
    """Ambient dimension policy.

    Attributes:
        policy: rank (l = retained eigenvalue count), span (l = n + m) or fixed.
        value: The fixed l, only for the fixed policy.
    """

    policy: AmbientPolicy = AmbientPolicy.RANK
    value: int | None = None

    def __post_init__(self) -> None:
        if self.policy is AmbientPolicy.FIXED:
            if self.value is None or self.value < 0:
                raise AmbientDimensionError(
                    f"Fixed ambient dimension must be a nonnegative integer, got {self.value}"
                )
        elif self.value is not None:
            raise AmbientDimensionError(f"Policy '{self.policy.value}' takes no value")

    @classmethod
    def parse(cls, text: str) -> AmbientDimension:
        """Parse ``rank``, ``span`` or ``fixed:<n>``.

        Raises:
            AmbientDimensionError: If the text is not a valid policy.
        """
        name, _, raw = text.strip().lower().partition(":")
        if name == AmbientPolicy.RANK.value and not raw:
            return cls(AmbientPolicy.RANK)
        if name == AmbientPolicy.SPAN.value and not raw:
            return cls(AmbientPolicy.SPAN)
        if name == AmbientPolicy.FIXED.value and raw:
            try:
                return cls(AmbientPolicy.FIXED, int(raw))
            except ValueError as e:
                raise AmbientDimensionError(f"Invalid fixed ambient dimension '{raw}'") from e
        raise AmbientDimensionError(
            f"Unknown ambient dimension policy '{text}'. Must be one of: rank, span, fixed:<n>"
        )

    def describe(self) -> str:
        if self.policy is AmbientPolicy.FIXED:
            return f"fixed:{self.value}"
        return self.policy.value

    def resolve(self, rank: int, n: int, m: int) -> int:
        """Return l for a spectrum of ``rank`` retained eigenvalues.

        Raises:
            AmbientDimensionError: If a fixed l is below the retained rank.
        """
        if self.policy is AmbientPolicy.RANK:
            return rank
        if self.policy is AmbientPolicy.SPAN:
            return n + m
        assert self.value is not None
        if self.value < rank:
            raise AmbientDimensionError(
                f"Fixed ambient dimension {self.value} is below the retained rank {rank}"
            )
        return self.value


def _spectral_inputs(
    a: RkhsGaussian,
    b: RkhsGaussian,
    ambient: AmbientDimension,
    workers: int,
) -> tuple[float, NDArray[np.float64], int]:
    """Return (MMD^2 + tr Sigma0 + tr Sigma1, spectrum, l)."""
    blocks = GramBlocks.build(a, b, workers=workers)
    mmd = 0.0 if a.same_as(b) else clamp_nonnegative(blocks.mmd_squared, blocks.scale, "MMD^2")
    spectrum = blocks.spectrum()
    dim = ambient.resolve(spectrum.size, a.n, b.n)
    logger.debug("entropic KW2: %d retained eigenvalues, l = %d", spectrum.size, dim)
    trace0 = clamp_nonnegative(blocks.trace0, blocks.scale, "tr Sigma0")
    trace1 = clamp_nonnegative(blocks.trace1, blocks.scale, "tr Sigma1")
    return mmd + trace0 + trace1, spectrum, dim


def entropic_kw2_squared(
    a: RkhsGaussian,
    b: RkhsGaussian,
    epsilon: float,
    ambient: AmbientDimension | None = None,
    workers: int = 1,
) -> float:
    """Entropy-regularized squared KW2 (epsilon form).

    MMD^2 + tr Sigma0 + tr Sigma1 - (eps/2) sum_i (s_i - log(1 + s_i) - (1 - log 2))
    with s_i = sqrt(1 + 16 lambda_i / eps^2) over l eigenvalues of Sigma0 Sigma1.

    Args:
        a: First RKHS Gaussian.
        b: Second RKHS Gaussian.
        epsilon: Regularization strength.
        ambient: Ambient dimension policy (default rank).
        workers: Threads used for the Gram blocks.

    Returns:
        Regularized squared distance.

    Raises:
        KernelSpecMismatchError: If the kernels differ.
        AmbientDimensionError: If the policy gives l below the retained rank.
        RkhsError: If epsilon <= 0.
    """
    if not (epsilon > 0 and np.isfinite(epsilon)):
        raise RkhsError(f"epsilon must be a positive real, got {epsilon}")
    base, spectrum, dim = _spectral_inputs(a, b, ambient or AmbientDimension(), workers)
    try:
        return base - entropic_cross_term(spectrum, epsilon, dim)
    except GaussianError as e:
        raise RkhsError(str(e)) from e


def entropic_kw2_sigma(
    a: RkhsGaussian,
    b: RkhsGaussian,
    sigma2: float,
    ambient: AmbientDimension | None = None,
    workers: int = 1,
) -> float:
    """Entropy-regularized squared KW2 (sigma form).

    MMD^2 + tr Sigma0 + tr Sigma1 - F with
    F = sum_i d_i - l sigma^2 (1 - log 2 sigma^2) - sigma^2 sum_i log(d_i + sigma^2)
    and d_i = sqrt(4 lambda_i + sigma^4) over l eigenvalues (zeros give d_i = sigma^2).

    Raises:
        KernelSpecMismatchError: If the kernels differ.
        AmbientDimensionError: If the policy gives l below the retained rank.
        RkhsError: If sigma2 <= 0.
    """
    if not (sigma2 > 0 and np.isfinite(sigma2)):
        raise RkhsError(f"sigma2 must be a positive real, got {sigma2}")
    base, spectrum, dim = _spectral_inputs(a, b, ambient or AmbientDimension(), workers)
    lam = np.zeros(dim)
    lam[: spectrum.size] = spectrum
    d_eigs = np.sqrt(4.0 * lam + sigma2**2)
    f = (
        float(np.sum(d_eigs))
        - dim * sigma2 * (1.0 - np.log(2.0 * sigma2))
        - sigma2 * float(np.sum(np.log(d_eigs + sigma2)))
    )
    return base - f
