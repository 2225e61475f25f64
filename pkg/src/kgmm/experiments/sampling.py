"""Subsampling experiments: spread of the mixture distance over random subsets."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from kgmm.experiments.report import ExperimentError, ExperimentReport
from kgmm.kernel.core import Dataset, KernelSpec
from kgmm.mixture.distance import kernel_cost_matrix
from kgmm.mixture.models import KernelMixture, MixtureError
from kgmm.transport.simplex import TransportProblem, solve

logger = logging.getLogger(__name__)

WeightPair = tuple[tuple[float, ...], tuple[float, ...]]


def stratified_indices(labels: NDArray[np.int64], size: int, rng: np.random.Generator) -> NDArray[np.int64]:
    """Draw ``size`` indices without replacement, keeping label proportions.

    Per-label counts use largest remainders so they add up to ``size``.
    Indices are returned sorted, so a full-size draw is the identity.

    Raises:
        ExperimentError: If size is not in [1, n] or a label would need more points than it has.
    """
    n = labels.size
    if not 1 <= size <= n:
        raise ExperimentError(f"Sample size {size} must lie in [1, {n}]")
    values, counts = np.unique(labels, return_counts=True)
    exact = counts * size / n
    take = np.floor(exact).astype(np.int64)
    short = size - int(take.sum())
    order = np.argsort(-(exact - take), kind="stable")
    take[order[:short]] += 1
    if np.any(take > counts):
        raise ExperimentError(f"Sample size {size} exceeds a label group under stratification")

    chosen = [
        rng.choice(np.flatnonzero(labels == value), size=int(k), replace=False)
        for value, k in zip(values, take)
    ]
    return np.sort(np.concatenate(chosen)).astype(np.int64)


def _labels_of(data: Dataset) -> tuple[NDArray[np.int64], list[int]]:
    if data.labels is None:
        raise ExperimentError("Subsampling experiments need labeled datasets")
    return data.labels, data.label_values


def _mixture_pair_cost(
    data0: Dataset,
    data1: Dataset,
    spec: KernelSpec,
    labels0: list[int],
    labels1: list[int],
) -> NDArray[np.float64]:
    mu0 = KernelMixture.from_dataset(data0, spec, np.full(len(labels0), 1.0 / len(labels0)), labels0)
    mu1 = KernelMixture.from_dataset(data1, spec, np.full(len(labels1), 1.0 / len(labels1)), labels1)
    return kernel_cost_matrix(mu0, mu1)


def _distance(cost: NDArray[np.float64], weights: WeightPair) -> float:
    plan = solve(TransportProblem.from_arrays(cost, weights[0], weights[1]))
    return float(np.sqrt(max(plan.objective, 0.0)))


def sample_experiment(
    data0: Dataset,
    data1: Dataset,
    spec: KernelSpec,
    weights: Sequence[WeightPair],
    sizes: Sequence[int],
    repeats: int,
    seed: int,
    workers: int = 1,
) -> ExperimentReport:
    """Mean and standard deviation of the kernel mixture distance over subsamples.

    For every sample size, ``repeats`` stratified subsamples of both datasets
    are drawn; each subsample pair gives one cost matrix that is reused for
    every weight pair. Repeat r of size s draws from its own stream spawned
    from ``SeedSequence(seed)``, so the report does not depend on ``workers``.

    Args:
        data0: First labeled dataset.
        data1: Second labeled dataset.
        spec: Kernel.
        weights: Weight pairs (weights0, weights1) to evaluate.
        sizes: Sample sizes, drawn from each dataset.
        repeats: Subsamples per size.
        seed: Root seed.
        workers: Threads running repeats concurrently.

    Returns:
        ExperimentReport with one cell per (weights, size) and the full-data reference.

    Raises:
        ExperimentError: On missing labels, invalid sizes or repeats.
    """
    if repeats < 1:
        raise ExperimentError(f"repeats must be >= 1, got {repeats}")
    labels0, values0 = _labels_of(data0)
    labels1, values1 = _labels_of(data1)

    try:
        full_cost = _mixture_pair_cost(data0, data1, spec, values0, values1)
        reference = {pair: _distance(full_cost, pair) for pair in weights}
    except MixtureError as e:
        raise ExperimentError(str(e)) from e

    streams = np.random.SeedSequence(seed).spawn(len(sizes) * repeats)
    report = ExperimentReport(
        config={
            "command": "sample-exp",
            "kernel": spec.describe(),
            "seed": seed,
            "sizes": list(sizes),
            "repeats": repeats,
            "weights": [list(map(list, pair)) for pair in weights],
        },
        reference=[
            {"params": {"weights0": list(pair[0]), "weights1": list(pair[1])}, "value": value}
            for pair, value in reference.items()
        ],
    )

    for k, size in enumerate(sizes):

        def run(r: int, size: int = size, k: int = k) -> NDArray[np.float64]:
            rng = np.random.default_rng(streams[k * repeats + r])
            sub0 = data0.subsample(stratified_indices(labels0, size, rng))
            sub1 = data1.subsample(stratified_indices(labels1, size, rng))
            try:
                return _mixture_pair_cost(sub0, sub1, spec, values0, values1)
            except MixtureError as e:
                raise ExperimentError(f"Sample size {size}: {e}") from e

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                costs = list(pool.map(run, range(repeats)))
        else:
            costs = [run(r) for r in range(repeats)]

        for pair in weights:
            values = np.array([_distance(cost, pair) for cost in costs])
            report.add(
                {"weights0": list(pair[0]), "weights1": list(pair[1]), "size": size},
                mean=float(values.mean()),
                std=float(values.std()),
                repeats=repeats,
            )
        logger.info("sample size %d: %d repeats done", size, repeats)
    return report
