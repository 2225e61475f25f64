"""Transportation simplex for the discrete optimal transport problem.

The solver keeps a spanning-tree basis of N0 + N1 - 1 cells. It starts from
the northwest corner rule, prices cells with the dual potentials u, v (MODI)
and pivots with Bland's rule. Supplies are perturbed by a tiny amount so that
every basic flow stays positive; the perturbation is removed on exit by
recomputing the flows of the final basis from the original marginals.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

# Marginals are renormalized when their sum is within this distance of 1.
MASS_TOL = 1e-9

# Per-supply perturbation; the last demand absorbs N0 times this amount.
PERTURBATION = 1e-12

Cell = tuple[int, int]


class TransportError(Exception):
    """Base exception for discrete transport errors."""

    pass


class InfeasibleMarginalsError(TransportError):
    """Raised when marginals are negative or do not carry unit mass."""

    pass


class SolverError(TransportError):
    """Raised when the simplex exceeds its pivot budget or its basis breaks."""

    pass


def _probability_vector(values: ArrayLike, name: str) -> NDArray[np.float64]:
    p = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if p.ndim != 1 or p.size == 0:
        raise InfeasibleMarginalsError(f"{name} must be a non-empty vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InfeasibleMarginalsError(f"{name} contains non-finite values")
    if np.any(p < 0):
        raise InfeasibleMarginalsError(f"{name} has negative entries")
    total = float(p.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise InfeasibleMarginalsError(f"{name} sums to {total!r}, expected 1")
    return np.asarray(p / total)


@dataclass(frozen=True, eq=False)
class TransportProblem:
    """Cost matrix and the two marginals of a transport problem.

    Attributes:
        cost: (N0, N1) finite cost matrix.
        p0: Supply marginal of length N0.
        p1: Demand marginal of length N1.
    """

    cost: NDArray[np.float64]
    p0: NDArray[np.float64]
    p1: NDArray[np.float64]

    def __post_init__(self) -> None:
        cost = np.atleast_2d(np.asarray(self.cost, dtype=np.float64))
        p0 = _probability_vector(self.p0, "p0")
        p1 = _probability_vector(self.p1, "p1")
        if cost.shape != (p0.size, p1.size):
            raise TransportError(
                f"Cost matrix shape {cost.shape} does not match marginals ({p0.size}, {p1.size})"
            )
        if not np.all(np.isfinite(cost)):
            raise TransportError("Cost matrix contains non-finite values")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    @classmethod
    def from_arrays(cls, cost: ArrayLike, p0: ArrayLike, p1: ArrayLike) -> TransportProblem:
        """Build a problem, renormalizing marginals that sum to 1 within tolerance.

        Raises:
            InfeasibleMarginalsError: If a marginal is negative or its mass is off by more than 1e-9.
            TransportError: If the cost matrix is non-finite or mis-shaped.
        """
        return cls(
            np.asarray(cost, dtype=np.float64),
            np.asarray(p0, dtype=np.float64),
            np.asarray(p1, dtype=np.float64),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.p0.size), int(self.p1.size))


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Optimal plan with the basis and potentials that certify it.

    Attributes:
        problem: The solved problem.
        pi: (N0, N1) nonnegative plan.
        objective: sum of cost * pi.
        basis: The N0 + N1 - 1 basic cells.
        u: Row potentials.
        v: Column potentials.
        iterations: Number of pivots performed.
    """

    problem: TransportProblem
    pi: NDArray[np.float64]
    objective: float
    basis: tuple[Cell, ...]
    u: NDArray[np.float64]
    v: NDArray[np.float64]
    iterations: int = 0

    def reduced_costs(self) -> NDArray[np.float64]:
        """c_ij - u_i - v_j; zero on basic cells and nonnegative at an optimum."""
        return np.asarray(self.problem.cost - self.u[:, None] - self.v[None, :])

    def marginal_violation(self) -> float:
        rows = np.abs(self.pi.sum(axis=1) - self.problem.p0)
        cols = np.abs(self.pi.sum(axis=0) - self.problem.p1)
        return float(max(rows.max(), cols.max()))


def northwest_corner(n0: int, n1: int, supply: ArrayLike, demand: ArrayLike) -> list[Cell]:
    """Staircase basis of the northwest corner rule.

    The walk moves down when the current supply is exhausted first and right
    otherwise, so it always visits exactly n0 + n1 - 1 cells.
    """
    a = np.array(supply, dtype=np.float64)
    b = np.array(demand, dtype=np.float64)
    i = j = 0
    cells: list[Cell] = []
    while True:
        cells.append((i, j))
        x = min(a[i], b[j])
        a[i] -= x
        b[j] -= x
        if i == n0 - 1 and j == n1 - 1:
            return cells
        if i == n0 - 1:
            j += 1
        elif j == n1 - 1 or a[i] <= b[j]:
            i += 1
        else:
            j += 1


def is_spanning_tree(cells: Sequence[Cell], n0: int, n1: int) -> bool:
    """True if the cells form a spanning tree of the bipartite row/column graph."""
    if len(cells) != n0 + n1 - 1:
        return False
    parent = list(range(n0 + n1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in cells:
        ri, rj = find(i), find(n0 + j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def tree_flows(
    cells: Sequence[Cell],
    supply: ArrayLike,
    demand: ArrayLike,
) -> NDArray[np.float64]:
    """Flows of a spanning-tree basis that meet the marginals exactly.

    Leaves are peeled one at a time: a row or column with a single remaining
    basic cell fixes that cell's flow to its residual marginal.

    Raises:
        SolverError: If the cells do not form a spanning tree.
    """
    a = np.array(supply, dtype=np.float64)
    b = np.array(demand, dtype=np.float64)
    n0, n1 = a.size, b.size
    if not is_spanning_tree(cells, n0, n1):
        raise SolverError(f"Basis of {len(cells)} cells is not a spanning tree of {n0}x{n1}")

    flows = np.zeros((n0, n1))
    remaining = set(cells)
    row_cells: dict[int, set[Cell]] = {i: set() for i in range(n0)}
    col_cells: dict[int, set[Cell]] = {j: set() for j in range(n1)}
    for cell in cells:
        row_cells[cell[0]].add(cell)
        col_cells[cell[1]].add(cell)

    while remaining:
        leaf: Optional[tuple[Cell, bool]] = None
        for i in range(n0):
            if len(row_cells[i]) == 1:
                leaf = (next(iter(row_cells[i])), True)
                break
        if leaf is None:
            for j in range(n1):
                if len(col_cells[j]) == 1:
                    leaf = (next(iter(col_cells[j])), False)
                    break
        if leaf is None:
            raise SolverError("Basis has no leaf to peel")

        (i, j), is_row = leaf
        x = a[i] if is_row else b[j]
        flows[i, j] = x
        a[i] -= x
        b[j] -= x
        remaining.discard((i, j))
        row_cells[i].discard((i, j))
        col_cells[j].discard((i, j))
    return flows


def _potentials(
    cells: Sequence[Cell],
    cost: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Solve u_i + v_j = c_ij on the basis with u_0 = 0, by breadth-first search."""
    n0, n1 = cost.shape
    adjacency: dict[int, list[int]] = {k: [] for k in range(n0 + n1)}
    for i, j in cells:
        adjacency[i].append(n0 + j)
        adjacency[n0 + j].append(i)

    potential = np.full(n0 + n1, np.nan)
    potential[0] = 0.0
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for other in adjacency[node]:
            if not np.isnan(potential[other]):
                continue
            if node < n0:
                potential[other] = cost[node, other - n0] - potential[node]
            else:
                potential[other] = cost[other, node - n0] - potential[node]
            queue.append(other)
    if np.any(np.isnan(potential)):
        raise SolverError("Basis does not reach every row and column")
    return potential[:n0].copy(), potential[n0:].copy()


def _tree_path(cells: Sequence[Cell], n0: int, start: int, goal: int) -> list[Cell]:
    """Cells on the unique tree path between two nodes (rows 0..n0-1, columns after)."""
    adjacency: dict[int, list[tuple[int, Cell]]] = {}
    for i, j in cells:
        adjacency.setdefault(i, []).append((n0 + j, (i, j)))
        adjacency.setdefault(n0 + j, []).append((i, (i, j)))

    previous: dict[int, tuple[int, Cell]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for other, cell in adjacency.get(node, []):
            if other not in seen:
                seen.add(other)
                previous[other] = (node, cell)
                queue.append(other)
    if goal not in seen:
        raise SolverError("Entering cell does not close a cycle with the basis")

    path: list[Cell] = []
    node = goal
    while node != start:
        node, cell = previous[node]
        path.append(cell)
    path.reverse()
    return path


def solve(
    problem: TransportProblem,
    tol: float = 1e-9,
    max_iter: Optional[int] = None,
) -> TransportPlan:
    """Solve the transport problem exactly.

    Args:
        problem: Cost matrix and marginals.
        tol: Reduced costs below -tol * max(1, max|c|) make a cell eligible to enter.
        max_iter: Pivot budget (default 50 (N0 + N1)^2).

    Returns:
        Optimal TransportPlan with its basis and potentials.

    Raises:
        SolverError: If the pivot budget is exhausted.
    """
    n0, n1 = problem.shape
    cost = problem.cost
    budget = max_iter if max_iter is not None else 50 * (n0 + n1) ** 2
    threshold = -tol * max(1.0, float(np.max(np.abs(cost))))

    supply = problem.p0 + PERTURBATION
    demand = problem.p1.copy()
    demand[-1] += n0 * PERTURBATION

    basis = northwest_corner(n0, n1, supply, demand)
    flows = tree_flows(basis, supply, demand)

    iterations = 0
    while True:
        u, v = _potentials(basis, cost)
        reduced = cost - u[:, None] - v[None, :]
        for i, j in basis:
            reduced[i, j] = 0.0
        candidates = np.argwhere(reduced < threshold)
        if candidates.size == 0:
            break
        if iterations >= budget:
            raise SolverError(f"Transportation simplex exceeded {budget} pivots")

        # Bland's rule: first eligible cell in row-major order.
        entering = (int(candidates[0][0]), int(candidates[0][1]))
        # Path from the entering column back to the entering row; it starts in
        # that column, so its cells alternate -, +, -, ... and ends with -.
        path = _tree_path(basis, n0, n0 + entering[1], entering[0])
        minus = path[0::2]
        plus = path[1::2]
        leaving = min(minus, key=lambda cell: (flows[cell], cell))
        theta = flows[leaving]

        flows[entering] += theta
        for cell in plus:
            flows[cell] += theta
        for cell in minus:
            flows[cell] -= theta
        flows[leaving] = 0.0
        basis[basis.index(leaving)] = entering
        iterations += 1
        logger.debug(
            "pivot %d: enter %s (reduced cost %.3e), leave %s, theta %.3e",
            iterations,
            entering,
            reduced[entering],
            leaving,
            theta,
        )

    pi = tree_flows(basis, problem.p0, problem.p1)
    pi[(pi < 0) & (pi >= -MASS_TOL)] = 0.0
    if np.any(pi < 0):
        raise SolverError(f"Final plan has negative flow {float(pi.min()):.3e}")
    u, v = _potentials(basis, cost)
    objective = float(np.sum(cost * pi))
    logger.debug("transport solved in %d pivots, objective %.12g", iterations, objective)
    return TransportPlan(
        problem=problem,
        pi=pi,
        objective=objective,
        basis=tuple(sorted(basis)),
        u=u,
        v=v,
        iterations=iterations,
    )
