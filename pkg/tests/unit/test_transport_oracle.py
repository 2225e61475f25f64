"""Unit tests for the brute-force transport oracle."""

import numpy as np
import pytest

from kgmm.transport.oracle import OracleSizeError, enumerate_optimum
from kgmm.transport.simplex import TransportError, TransportProblem


class TestEnumerateOptimum:
    """Tests for enumerate_optimum()."""

    def test_zero_cost(self) -> None:
        """Test that a zero cost matrix gives zero."""
        problem = TransportProblem.from_arrays(np.zeros((3, 2)), [0.2, 0.3, 0.5], [0.6, 0.4])
        assert enumerate_optimum(problem) == pytest.approx(0.0, abs=1e-15)

    def test_anti_diagonal(self) -> None:
        """Test c = [[0, 1], [1, 0]] with uniform marginals."""
        problem = TransportProblem.from_arrays([[0.0, 1.0], [1.0, 0.0]], [0.5, 0.5], [0.5, 0.5])
        assert enumerate_optimum(problem) == pytest.approx(0.0, abs=1e-15)

    def test_vertex_optimum_off_grid(self) -> None:
        """Test that an optimum between grid points is still found exactly."""
        problem = TransportProblem.from_arrays([[0.0, 1.0], [1.0, 0.0]], [0.37, 0.63], [0.41, 0.59])
        assert enumerate_optimum(problem, grid=1) == pytest.approx(0.04, abs=1e-12)

    def test_single_cell(self) -> None:
        """Test a 1x1 problem."""
        assert enumerate_optimum(TransportProblem.from_arrays([[2.5]], [1.0], [1.0])) == pytest.approx(2.5)

    def test_rejects_large_problems(self) -> None:
        """Test that more than three rows or columns raise."""
        problem = TransportProblem.from_arrays(np.ones((4, 2)), np.full(4, 0.25), [0.5, 0.5])
        with pytest.raises(OracleSizeError):
            enumerate_optimum(problem)

    def test_rejects_empty_grid(self) -> None:
        """Test that the grid needs at least one interval."""
        problem = TransportProblem.from_arrays([[1.0]], [1.0], [1.0])
        with pytest.raises(TransportError, match="Grid"):
            enumerate_optimum(problem, grid=0)
