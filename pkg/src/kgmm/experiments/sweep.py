"""Probability sweeps: mixture distance over a grid of component weights."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from kgmm.experiments.report import ExperimentError, ExperimentReport
from kgmm.kernel.core import Dataset, KernelSpec
from kgmm.mixture.distance import kernel_cost_matrix
from kgmm.mixture.models import KernelMixture, MixtureError
from kgmm.transport.simplex import TransportError, TransportProblem, solve

logger = logging.getLogger(__name__)

# Component weight pairs of the published probability tables.
TABLE_WEIGHTS: tuple[tuple[float, float], ...] = (
    (0.1, 0.9),
    (0.3, 0.7),
    (0.5, 0.5),
    (0.7, 0.3),
    (0.9, 0.1),
)


def _cost_matrix(data0: Dataset, data1: Dataset, spec: KernelSpec, workers: int) -> NDArray[np.float64]:
    """KW2^2 between the labeled groups; the weights only enter the marginals."""
    uniform0 = np.full(len(data0.label_values), 1.0 / max(len(data0.label_values), 1))
    uniform1 = np.full(len(data1.label_values), 1.0 / max(len(data1.label_values), 1))
    mu0 = KernelMixture.from_dataset(data0, spec, uniform0)
    mu1 = KernelMixture.from_dataset(data1, spec, uniform1)
    return kernel_cost_matrix(mu0, mu1, workers=workers)


def table_sweep(
    data0: Dataset,
    data1: Dataset,
    specs: Sequence[KernelSpec],
    weight_grid: Sequence[Sequence[float]] = TABLE_WEIGHTS,
    workers: int = 1,
) -> ExperimentReport:
    """Kernel mixture distance for every (weights0, weights1) pair of the grid, per kernel.

    Args:
        data0: First labeled dataset.
        data1: Second labeled dataset.
        specs: Kernels to sweep (typically RBF at several gamma).
        weight_grid: Candidate weight vectors, used for both mixtures.
        workers: Threads for the cost matrix entries.

    Returns:
        ExperimentReport with len(specs) * len(weight_grid)^2 cells.

    Raises:
        ExperimentError: If a dataset is unlabeled or weights do not fit its components.
    """
    report = ExperimentReport(
        config={
            "command": "sweep",
            "kernels": [s.describe() for s in specs],
            "weight_grid": [list(w) for w in weight_grid],
        }
    )
    for spec in specs:
        try:
            cost = _cost_matrix(data0, data1, spec, workers)
            for w0 in weight_grid:
                for w1 in weight_grid:
                    plan = solve(TransportProblem.from_arrays(cost, w0, w1))
                    report.add(
                        {"kernel": spec.describe(), "weights0": list(w0), "weights1": list(w1)},
                        value=float(np.sqrt(max(plan.objective, 0.0))),
                    )
        except (MixtureError, TransportError) as e:
            raise ExperimentError(str(e)) from e
        logger.info("sweep for %s done", spec.describe())
    return report
