"""Transport distance between mixtures with component-wise W2 / KW2 costs."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.typing import NDArray

from kgmm.gaussian.closed_form import w2_squared
from kgmm.mixture.models import GaussianMixture, KernelMixture
from kgmm.rkhs.distance import KernelSpecMismatchError, kw2_squared
from kgmm.transport.simplex import TransportPlan, TransportProblem, solve

logger = logging.getLogger(__name__)


def gaussian_cost_matrix(mu0: GaussianMixture, mu1: GaussianMixture) -> NDArray[np.float64]:
    """c_ij = W2^2 between component i of mu0 and component j of mu1."""
    return np.array([[w2_squared(g0, g1) for g1 in mu1.components] for g0 in mu0.components])


def kernel_cost_matrix(
    mu0: KernelMixture,
    mu1: KernelMixture,
    workers: int = 1,
) -> NDArray[np.float64]:
    """c_ij = KW2^2 between group i of mu0 and group j of mu1.

    Entries are independent; with workers > 1 they are computed on a thread
    pool and written back by index.

    Raises:
        KernelSpecMismatchError: If the mixtures use different kernels.
    """
    if mu0.spec != mu1.spec:
        raise KernelSpecMismatchError(
            f"Mixtures use different kernels: {mu0.spec.describe()} vs {mu1.spec.describe()}"
        )
    pairs = [(i, j) for i in range(mu0.size) for j in range(mu1.size)]
    cost = np.zeros((mu0.size, mu1.size))

    def entry(pair: tuple[int, int]) -> float:
        i, j = pair
        return kw2_squared(mu0.groups[i], mu1.groups[j])

    if workers <= 1:
        values = [entry(pair) for pair in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(entry, pairs))
    for (i, j), value in zip(pairs, values):
        cost[i, j] = value
    return cost


def _distance(cost: NDArray[np.float64], p0: NDArray[np.float64], p1: NDArray[np.float64]) -> tuple[float, TransportPlan]:
    plan = solve(TransportProblem.from_arrays(cost, p0, p1))
    logger.debug("mixture transport cost matrix %s, objective %.12g", cost.tolist(), plan.objective)
    return float(np.sqrt(max(plan.objective, 0.0))), plan


def mixture_distance(mu0: GaussianMixture, mu1: GaussianMixture) -> tuple[float, TransportPlan]:
    """Distance between input-space Gaussian mixtures.

    Args:
        mu0: First mixture.
        mu1: Second mixture.

    Returns:
        Tuple (sqrt of the optimal objective, optimal plan).

    Raises:
        DimensionMismatchError: If the mixtures live in different dimensions.
    """
    return _distance(gaussian_cost_matrix(mu0, mu1), mu0.weights, mu1.weights)


def kernel_mixture_distance(
    mu0: KernelMixture,
    mu1: KernelMixture,
    workers: int = 1,
) -> tuple[float, TransportPlan]:
    """Distance between mixtures of feature-space Gaussians.

    Raises:
        KernelSpecMismatchError: If the mixtures use different kernels.
    """
    return _distance(kernel_cost_matrix(mu0, mu1, workers=workers), mu0.weights, mu1.weights)
