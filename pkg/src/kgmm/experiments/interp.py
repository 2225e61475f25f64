"""Density grids along the mixture geodesic."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from kgmm.experiments.report import ExperimentError, ExperimentReport
from kgmm.gaussian.closed_form import Gaussian
from kgmm.mixture.geodesic import MixtureGeodesic, density, grid_transport_interpolation
from kgmm.mixture.models import GaussianMixture

logger = logging.getLogger(__name__)

DEFAULT_T_VALUES: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)

# Default 1-D pair for interpolation grids.
EXAMPLE_MIXTURES: dict[str, GaussianMixture] = {
    "mu0": GaussianMixture.of(
        [Gaussian.from_params([0.2], [[0.002]]), Gaussian.from_params([0.4], [[0.004]])],
        [0.3, 0.7],
    ),
    "mu1": GaussianMixture.of(
        [Gaussian.from_params([0.6], [[0.005]]), Gaussian.from_params([0.8], [[0.004]])],
        [0.6, 0.4],
    ),
}


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid, the same axis in every dimension.

    Attributes:
        lo: Lower end of the axis.
        hi: Upper end of the axis.
        points: Points per axis.
    """

    lo: float = -0.2
    hi: float = 1.2
    points: int = 512

    def __post_init__(self) -> None:
        if not self.hi > self.lo:
            raise ExperimentError(f"Grid needs hi > lo, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise ExperimentError(f"Grid needs at least 2 points, got {self.points}")

    def axis(self) -> NDArray[np.float64]:
        return np.linspace(self.lo, self.hi, self.points)

    def mesh(self, dim: int) -> NDArray[np.float64]:
        """(points^dim, dim) grid points, first coordinate varying slowest."""
        axes = np.meshgrid(*([self.axis()] * dim), indexing="ij")
        return np.stack([a.ravel() for a in axes], axis=1)


@dataclass
class DensityTable:
    """Grid coordinates followed by one density column per series."""

    columns: list[str] = field(default_factory=list)
    values: NDArray[np.float64] = field(default_factory=lambda: np.zeros((0, 0)))

    def column(self, name: str) -> NDArray[np.float64]:
        return np.asarray(self.values[:, self.columns.index(name)])

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.values:
            writer.writerow([repr(float(v)) for v in row])
        return buffer.getvalue()


def interp_emit(
    mu0: GaussianMixture,
    mu1: GaussianMixture,
    t_values: Sequence[float] = DEFAULT_T_VALUES,
    grid: GridSpec | None = None,
    grid_ot: bool = False,
) -> tuple[DensityTable, ExperimentReport]:
    """Evaluate the geodesic mixture density at each t on a grid.

    Columns are ``x`` (or ``x0``, ``x1``, ...) then ``t=<t>`` per time. With
    ``grid_ot`` (1-D only) the unconstrained grid transport reconstruction is
    appended as ``grid_ot:t=<t>`` columns.

    Raises:
        ExperimentError: If dimensions differ, exceed 2, or grid_ot is asked for in 2-D.
        SingularCovarianceError: If a component covariance is degenerate.
    """
    grid = grid or GridSpec()
    if mu0.dim != mu1.dim or mu0.dim > 2:
        raise ExperimentError("Interpolation grids support 1-D or 2-D mixtures of equal dimension")
    if grid_ot and mu0.dim != 1:
        raise ExperimentError("Grid transport comparison is available for 1-D mixtures only")

    points = grid.mesh(mu0.dim)
    path = MixtureGeodesic.between(mu0, mu1)
    columns = ["x"] if mu0.dim == 1 else [f"x{k}" for k in range(mu0.dim)]
    series = [points[:, k] for k in range(mu0.dim)]

    report = ExperimentReport(
        config={
            "command": "interp",
            "t_values": list(t_values),
            "grid": {"lo": grid.lo, "hi": grid.hi, "points": grid.points},
            "grid_ot": grid_ot,
        }
    )
    report.reference = [{"params": {}, "value": path.distance}]
    for t in t_values:
        mixture = path.at(t)
        columns.append(f"t={t!r}")
        series.append(density(mixture, points))
        report.add(
            {"t": t},
            components=mixture.size,
            weights=mixture.weights,
            means=[g.mean for g in mixture.components],
        )

    if grid_ot:
        logger.info("computing grid transport reconstruction on %d bins", grid.points)
        for t, values in zip(t_values, grid_transport_interpolation(mu0, mu1, t_values, points[:, 0])):
            columns.append(f"grid_ot:t={t!r}")
            series.append(values)

    return DensityTable(columns, np.column_stack(series)), report
