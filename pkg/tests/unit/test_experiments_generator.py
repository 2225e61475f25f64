"""Unit tests for seeded dataset generation."""

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from kgmm.experiments.generator import BUILTIN_DATASETS, ComponentSpec, DatasetSpec, generate
from kgmm.experiments.report import ExperimentError


class TestComponentSpec:
    """Tests for ComponentSpec."""

    def test_isotropic(self) -> None:
        """Test the isotropic constructor."""
        spec = ComponentSpec.isotropic((1.0, 2.0), scale=0.5, count=10)
        assert_array_equal(spec.cov, 0.5 * np.eye(2))
        assert spec.to_dict() == {"mean": [1.0, 2.0], "cov": [[0.5, 0.0], [0.0, 0.5]], "count": 10}

    def test_rejects_shape_mismatch(self) -> None:
        """Test that cov must match the mean."""
        with pytest.raises(ExperimentError, match="shape"):
            ComponentSpec(np.zeros(2), np.eye(3))

    def test_rejects_empty_count(self) -> None:
        """Test that count must be positive."""
        with pytest.raises(ExperimentError, match="count"):
            ComponentSpec.isotropic((0.0,), count=0)


class TestDatasetSpec:
    """Tests for DatasetSpec."""

    def test_rejects_empty(self) -> None:
        """Test that a dataset needs a component."""
        with pytest.raises(ExperimentError):
            DatasetSpec.of([])

    def test_rejects_mixed_dimensions(self) -> None:
        """Test that components share one dimension."""
        with pytest.raises(ExperimentError, match="dimensions"):
            DatasetSpec.of([ComponentSpec.isotropic((0.0,)), ComponentSpec.isotropic((0.0, 0.0))])

    def test_builtin_sizes(self) -> None:
        """Test that the built-in datasets have 1000 points in two groups."""
        for spec in BUILTIN_DATASETS.values():
            assert spec.size == 1000
            assert len(spec.components) == 2


class TestGenerate:
    """Tests for generate()."""

    def test_labels_and_blocks(self) -> None:
        """Test component blocks in order with labels 0 .. k-1."""
        data = generate(BUILTIN_DATASETS["dataset1"], seed=0)
        assert data.n == 1000
        assert data.dim == 2
        assert_array_equal(np.bincount(data.labels), [500, 500])
        assert_array_equal(data.labels[:500], 0)

    def test_seed_is_reproducible(self) -> None:
        """Test that the same seed gives the same points."""
        spec = BUILTIN_DATASETS["dataset2"]
        assert_array_equal(generate(spec, seed=5).points, generate(spec, seed=5).points)
        assert not np.array_equal(generate(spec, seed=5).points, generate(spec, seed=6).points)

    def test_component_moments(self) -> None:
        """Test that each block roughly follows its component."""
        spec = DatasetSpec.of([ComponentSpec.isotropic((3.0, -1.0), scale=0.25, count=4000)])
        data = generate(spec, seed=1)
        np.testing.assert_allclose(data.mean(), [3.0, -1.0], atol=0.05)
        np.testing.assert_allclose(data.covariance(), 0.25 * np.eye(2), atol=0.03)

    def test_explicit_generator(self) -> None:
        """Test drawing from a caller-owned generator."""
        spec = DatasetSpec.of([ComponentSpec.isotropic((0.0,), count=3)])
        first = generate(spec, rng=np.random.default_rng(9))
        second = generate(spec, seed=9)
        assert_array_equal(first.points, second.points)
