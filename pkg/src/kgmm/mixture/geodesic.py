"""Geodesics between Gaussian mixtures and density evaluation."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from kgmm.gaussian.closed_form import SingularCovarianceError, interpolate
from kgmm.mixture.distance import mixture_distance
from kgmm.mixture.models import GaussianMixture, MixtureError
from kgmm.transport.simplex import TransportPlan, TransportProblem, solve

logger = logging.getLogger(__name__)

# Plan entries at or below this weight do not produce a geodesic component.
ZERO_WEIGHT = 1e-14


@dataclass(frozen=True, eq=False)
class MixtureGeodesic:
    """Geodesic between two mixtures driven by one optimal plan.

    Attributes:
        mu0: Start mixture.
        mu1: End mixture.
        plan: Optimal plan between the components.
    """

    mu0: GaussianMixture
    mu1: GaussianMixture
    plan: TransportPlan

    @classmethod
    def between(cls, mu0: GaussianMixture, mu1: GaussianMixture) -> MixtureGeodesic:
        _, plan = mixture_distance(mu0, mu1)
        return cls(mu0, mu1, plan)

    @property
    def distance(self) -> float:
        return float(np.sqrt(max(self.plan.objective, 0.0)))

    def pairs(self) -> list[tuple[int, int]]:
        """Component pairs carrying mass, in row-major order."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.plan.pi > ZERO_WEIGHT)]

    def at(self, t: float) -> GaussianMixture:
        """Mixture at time t: pair (i, j) contributes pi_ij times the W2 interpolant.

        Raises:
            SingularCovarianceError: If a component covariance is degenerate.
            GaussianError: If t lies outside [0, 1].
        """
        pairs = self.pairs()
        components = [
            interpolate(self.mu0.components[i], self.mu1.components[j], t) for i, j in pairs
        ]
        weights = np.array([self.plan.pi[i, j] for i, j in pairs])
        return GaussianMixture.of(components, weights / weights.sum())


def geodesic(mu0: GaussianMixture, mu1: GaussianMixture, t: float) -> GaussianMixture:
    """Point at time t on the mixture geodesic from mu0 to mu1."""
    return MixtureGeodesic.between(mu0, mu1).at(t)


def _as_points(grid: ArrayLike, dim: int) -> NDArray[np.float64]:
    points = np.asarray(grid, dtype=np.float64)
    if points.ndim == 1 and dim == 1:
        points = points.reshape(-1, 1)
    if points.ndim != 2 or points.shape[1] != dim:
        raise MixtureError(f"Grid of shape {points.shape} does not match dimension {dim}")
    return points


def density(mu: GaussianMixture, grid: ArrayLike) -> NDArray[np.float64]:
    """Mixture density sum_k p_k N(x; theta_k, C_k) at each grid point.

    Args:
        mu: Mixture with non-degenerate components.
        grid: Points, either (k,) for 1-D mixtures or (k, d).

    Returns:
        Length-k vector of densities.

    Raises:
        SingularCovarianceError: If a component covariance is singular.
    """
    points = _as_points(grid, mu.dim)
    values = np.zeros(points.shape[0])
    for weight, component in zip(mu.weights, mu.components):
        try:
            pdf = stats.multivariate_normal(component.mean, component.cov).pdf(points)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SingularCovarianceError(f"Cannot evaluate density: {e}") from e
        values += weight * np.atleast_1d(pdf)
    return values


def scaling_check(
    mu0: GaussianMixture,
    mu1: GaussianMixture,
    s: float,
    t: float,
) -> tuple[float, float]:
    """Compare d(mu_s, mu_t) with (t - s) d(mu0, mu1) along the geodesic.

    Raises:
        MixtureError: If not 0 <= s < t <= 1.
    """
    if not 0.0 <= s < t <= 1.0:
        raise MixtureError(f"Expected 0 <= s < t <= 1, got s={s}, t={t}")
    path = MixtureGeodesic.between(mu0, mu1)
    d_st, _ = mixture_distance(path.at(s), path.at(t))
    return d_st, (t - s) * path.distance


def _uniform_grid(grid: ArrayLike) -> tuple[NDArray[np.float64], float]:
    x = np.asarray(grid, dtype=np.float64).ravel()
    if x.size < 2:
        raise MixtureError("Grid needs at least two points")
    steps = np.diff(x)
    dx = float(steps.mean())
    if dx <= 0 or not np.allclose(steps, dx, rtol=1e-9, atol=0.0):
        raise MixtureError("Grid must be uniform and increasing")
    return x, dx


def _rebin(positions: NDArray[np.float64], masses: NDArray[np.float64], x: NDArray[np.float64], dx: float) -> NDArray[np.float64]:
    """Split each mass linearly between the two nearest grid points."""
    offset = np.clip((positions - x[0]) / dx, 0.0, x.size - 1)
    left = np.minimum(np.floor(offset).astype(np.int64), x.size - 2)
    frac = offset - left
    binned = np.zeros(x.size)
    np.add.at(binned, left, masses * (1.0 - frac))
    np.add.at(binned, left + 1, masses * frac)
    return binned


def grid_transport_interpolation(
    mu0: GaussianMixture,
    mu1: GaussianMixture,
    t_values: Sequence[float],
    grid: ArrayLike,
) -> NDArray[np.float64]:
    """Displacement interpolation of the full densities on a uniform 1-D grid.

    Both densities are binned on the grid and transported with the discrete
    solver under squared distance; each transported mass moves on a straight
    line and is binned again at time t. This is a reconstruction of the
    unconstrained Wasserstein interpolation, not the mixture geodesic.

    Args:
        mu0: Start mixture (1-D).
        mu1: End mixture (1-D).
        t_values: Times in [0, 1].
        grid: Uniform increasing grid.

    Returns:
        (len(t_values), len(grid)) array of densities.

    Raises:
        MixtureError: If the mixtures are not 1-D or the grid is not uniform.
    """
    if mu0.dim != 1 or mu1.dim != 1:
        raise MixtureError("Grid transport interpolation supports 1-D mixtures only")
    x, dx = _uniform_grid(grid)
    for t in t_values:
        if not 0.0 <= t <= 1.0:
            raise MixtureError(f"Interpolation time must lie in [0, 1], got {t}")

    m0 = density(mu0, x)
    m1 = density(mu1, x)
    m0, m1 = m0 / m0.sum(), m1 / m1.sum()
    cost = (x[:, None] - x[None, :]) ** 2
    plan = solve(TransportProblem.from_arrays(cost, m0, m1))
    logger.debug("grid transport on %d bins solved in %d pivots", x.size, plan.iterations)

    rows, cols = np.nonzero(plan.pi > 0.0)
    masses = plan.pi[rows, cols]
    series = np.zeros((len(t_values), x.size))
    for k, t in enumerate(t_values):
        positions = (1.0 - t) * x[rows] + t * x[cols]
        series[k] = _rebin(positions, masses, x, dx) / dx
    return series
