"""Wall-clock timing of the kernel mixture distance against sample size."""

from __future__ import annotations

import logging
import time
from typing import Sequence

import numpy as np

from kgmm.experiments.report import ExperimentError, ExperimentReport
from kgmm.experiments.sampling import stratified_indices
from kgmm.kernel.core import Dataset, KernelSpec
from kgmm.mixture.distance import kernel_mixture_distance
from kgmm.mixture.models import KernelMixture, MixtureError

logger = logging.getLogger(__name__)


def _timed_distance(
    data0: Dataset,
    data1: Dataset,
    spec: KernelSpec,
    weights: tuple[Sequence[float], Sequence[float]],
    labels: tuple[list[int], list[int]],
) -> tuple[float, float]:
    start = time.perf_counter()
    mu0 = KernelMixture.from_dataset(data0, spec, weights[0], labels[0])
    mu1 = KernelMixture.from_dataset(data1, spec, weights[1], labels[1])
    value, _ = kernel_mixture_distance(mu0, mu1)
    return value, (time.perf_counter() - start) * 1000.0


def bench(
    data0: Dataset,
    data1: Dataset,
    spec: KernelSpec,
    sizes: Sequence[int],
    weights: tuple[Sequence[float], Sequence[float]],
    seed: int,
    include_full: bool = True,
) -> ExperimentReport:
    """Time one distance evaluation per sample size.

    Args:
        data0: First labeled dataset.
        data1: Second labeled dataset.
        spec: Kernel.
        sizes: Sample sizes in ascending order.
        weights: (weights0, weights1).
        seed: Seed of the subsampling generator.
        include_full: Also time the full datasets as the reference.

    Returns:
        ExperimentReport with one cell per size (value and elapsed_ms).

    Raises:
        ExperimentError: If sizes are not ascending or the datasets are unlabeled.
    """
    if list(sizes) != sorted(sizes):
        raise ExperimentError(f"Benchmark sizes must be ascending, got {list(sizes)}")
    if data0.labels is None or data1.labels is None:
        raise ExperimentError("Benchmarks need labeled datasets")
    labels = (data0.label_values, data1.label_values)

    report = ExperimentReport(
        config={
            "command": "bench",
            "kernel": spec.describe(),
            "seed": seed,
            "sizes": list(sizes),
            "weights0": list(weights[0]),
            "weights1": list(weights[1]),
        }
    )
    rng = np.random.default_rng(seed)
    try:
        for size in sizes:
            sub0 = data0.subsample(stratified_indices(data0.labels, size, rng))
            sub1 = data1.subsample(stratified_indices(data1.labels, size, rng))
            value, elapsed = _timed_distance(sub0, sub1, spec, weights, labels)
            logger.info("size %d: %.1f ms", size, elapsed)
            report.add({"size": size}, value=value, elapsed_ms=elapsed)
        if include_full and sizes:
            value, elapsed = _timed_distance(data0, data1, spec, weights, labels)
            report.reference = [
                {"params": {"size0": data0.n, "size1": data1.n}, "value": value, "elapsed_ms": elapsed}
            ]
    except MixtureError as e:
        raise ExperimentError(str(e)) from e
    return report
