"""Brute-force optimum of small transport problems, used to check the solver."""

from __future__ import annotations

import itertools

import numpy as np

from kgmm.transport.simplex import (
    TransportError,
    TransportProblem,
    is_spanning_tree,
    tree_flows,
)

MAX_ORACLE_SIZE = 3


class OracleSizeError(TransportError):
    """Raised when a problem is too large for exhaustive enumeration."""

    pass


def _grid_minimum(problem: TransportProblem, grid: int) -> float:
    """Minimum objective over a grid of the free top-left (N0-1) x (N1-1) block."""
    n0, n1 = problem.shape
    p0, p1, cost = problem.p0, problem.p1, problem.cost
    free = [(i, j) for i in range(n0 - 1) for j in range(n1 - 1)]

    axes = [np.linspace(0.0, min(p0[i], p1[j]), grid + 1) for i, j in free]
    mesh = [m.ravel() for m in np.meshgrid(*axes, indexing="ij")] if free else []
    count = mesh[0].size if mesh else 1

    plans = np.zeros((count, n0, n1))
    for (i, j), values in zip(free, mesh):
        plans[:, i, j] = values
    for i in range(n0 - 1):
        plans[:, i, n1 - 1] = p0[i] - plans[:, i, : n1 - 1].sum(axis=1)
    for j in range(n1):
        plans[:, n0 - 1, j] = p1[j] - plans[:, : n0 - 1, j].sum(axis=1)

    feasible = np.all(plans >= -1e-15, axis=(1, 2))
    if not np.any(feasible):
        return float("inf")
    objectives = np.einsum("kij,ij->k", plans[feasible], cost)
    return float(objectives.min())


def _vertex_minimum(problem: TransportProblem) -> float:
    """Minimum objective over every basic feasible solution of the polytope."""
    n0, n1 = problem.shape
    cells = [(i, j) for i in range(n0) for j in range(n1)]
    best = float("inf")
    for basis in itertools.combinations(cells, n0 + n1 - 1):
        if not is_spanning_tree(basis, n0, n1):
            continue
        flows = tree_flows(basis, problem.p0, problem.p1)
        if np.any(flows < -1e-12):
            continue
        best = min(best, float(np.sum(problem.cost * flows)))
    return best


def enumerate_optimum(problem: TransportProblem, grid: int = 20) -> float:
    """Optimal objective by exhaustive search.

    The objective is evaluated on a uniform grid of the free parameters of
    the polytope and on all of its vertices, so the returned value is the
    exact optimum at any grid resolution.

    Args:
        problem: Problem with N0, N1 <= 3.
        grid: Number of grid intervals per free parameter.

    Returns:
        Minimum objective.

    Raises:
        OracleSizeError: If N0 or N1 exceeds 3.
        TransportError: If grid < 1.
    """
    n0, n1 = problem.shape
    if n0 > MAX_ORACLE_SIZE or n1 > MAX_ORACLE_SIZE:
        raise OracleSizeError(
            f"Enumeration supports at most {MAX_ORACLE_SIZE}x{MAX_ORACLE_SIZE}, got {n0}x{n1}"
        )
    if grid < 1:
        raise TransportError(f"Grid resolution must be positive, got {grid}")
    return min(_grid_minimum(problem, grid), _vertex_minimum(problem))
