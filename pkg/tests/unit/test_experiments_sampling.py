"""Unit tests for stratified subsampling experiments."""

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from kgmm.experiments.generator import BUILTIN_DATASETS, ComponentSpec, DatasetSpec, generate
from kgmm.experiments.report import ExperimentError, ExperimentReport
from kgmm.experiments.sampling import sample_experiment, stratified_indices
from kgmm.kernel.core import Dataset, KernelSpec

SPEC0 = DatasetSpec.of([ComponentSpec.isotropic((-2.0, 0.0), count=30), ComponentSpec.isotropic((2.0, 0.0), count=30)])
SPEC1 = DatasetSpec.of([ComponentSpec.isotropic((0.0, -2.0), count=30), ComponentSpec.isotropic((0.0, 2.0), count=30)])
WEIGHTS = [((0.5, 0.5), (0.5, 0.5)), ((0.1, 0.9), (0.7, 0.3))]


class TestStratifiedIndices:
    """Tests for stratified_indices()."""

    def test_keeps_proportions(self) -> None:
        """Test per-label counts by largest remainder."""
        labels = np.repeat([0, 1, 2], [50, 30, 20])
        idx = stratified_indices(labels, 10, np.random.default_rng(0))
        assert_array_equal(np.bincount(labels[idx]), [5, 3, 2])

    def test_remainders_add_up(self) -> None:
        """Test that rounding still gives the requested size."""
        labels = np.repeat([0, 1, 2], [1, 1, 1])
        idx = stratified_indices(labels, 2, np.random.default_rng(0))
        assert idx.size == 2
        assert np.unique(idx).size == 2

    def test_full_size_is_identity(self) -> None:
        """Test that size n returns every index in order."""
        labels = np.array([1, 0, 1, 0, 0])
        assert_array_equal(stratified_indices(labels, 5, np.random.default_rng(3)), np.arange(5))

    @pytest.mark.parametrize("size", [0, 6])
    def test_rejects_size(self, size: int) -> None:
        """Test that size must lie in [1, n]."""
        with pytest.raises(ExperimentError):
            stratified_indices(np.zeros(5, dtype=np.int64), size, np.random.default_rng(0))


class TestSampleExperiment:
    """Tests for sample_experiment()."""

    def test_full_size_has_no_spread(self) -> None:
        """Test that subsamples of the full size reproduce the reference."""
        d0, d1 = generate(SPEC0, seed=1), generate(SPEC1, seed=2)
        report = sample_experiment(d0, d1, KernelSpec.rbf(1.0), WEIGHTS, [60], repeats=3, seed=4)
        assert len(report.cells) == len(WEIGHTS)
        for cell, reference in zip(report.cells, report.reference or []):
            assert cell["std"] == 0.0
            assert cell["mean"] == pytest.approx(reference["value"], abs=1e-12)

    def test_cells_per_size_and_weights(self) -> None:
        """Test the report layout."""
        d0, d1 = generate(SPEC0, seed=1), generate(SPEC1, seed=2)
        report = sample_experiment(d0, d1, KernelSpec.rbf(1.0), WEIGHTS, [10, 20], repeats=2, seed=4)
        assert len(report.cells) == 4
        assert report.cells[0]["params"] == {"weights0": [0.5, 0.5], "weights1": [0.5, 0.5], "size": 10}
        assert report.cells[0]["repeats"] == 2
        assert report.config["seed"] == 4

    def test_workers_do_not_change_report(self) -> None:
        """Test that threading leaves every value unchanged."""
        d0, d1 = generate(SPEC0, seed=1), generate(SPEC1, seed=2)
        serial = sample_experiment(d0, d1, KernelSpec.rbf(1.0), WEIGHTS, [10, 20], repeats=3, seed=8)
        threaded = sample_experiment(d0, d1, KernelSpec.rbf(1.0), WEIGHTS, [10, 20], repeats=3, seed=8, workers=3)
        assert serial.cells == threaded.cells

    def test_rejects_unlabeled(self) -> None:
        """Test that datasets must be labeled."""
        data = Dataset.from_points(np.zeros((4, 2)))
        with pytest.raises(ExperimentError, match="labeled"):
            sample_experiment(data, data, KernelSpec.linear(), WEIGHTS, [2], repeats=1, seed=0)

    def test_rejects_repeats(self) -> None:
        """Test that repeats must be positive."""
        d0 = generate(SPEC0, seed=1)
        with pytest.raises(ExperimentError, match="repeats"):
            sample_experiment(d0, d0, KernelSpec.linear(), WEIGHTS, [10], repeats=0, seed=0)


@pytest.mark.slow
class TestSampleExperimentConvergence:
    """Subsampling statistics on the generated default datasets."""

    @pytest.fixture(scope="class")
    def report(self) -> ExperimentReport:
        d0 = generate(BUILTIN_DATASETS["dataset1"], seed=0)
        d1 = generate(BUILTIN_DATASETS["dataset2"], seed=1)
        pairs = [((0.5, 0.5), (0.5, 0.5))]
        return sample_experiment(d0, d1, KernelSpec.rbf(1.0), pairs, [200, 400, 600, 800], repeats=20, seed=0, workers=4)

    def test_spread_shrinks_with_size(self, report: ExperimentReport) -> None:
        """Test that the standard deviation decreases from 200 to 800 points."""
        stds = [cell["std"] for cell in report.cells]
        assert stds[-1] < stds[0]
        inversions = sum(later > earlier for earlier, later in zip(stds, stds[1:]))
        assert inversions <= 1

    def test_means_within_two_std_of_reference(self, report: ExperimentReport) -> None:
        """Test that every size's mean lies within 2 std of the full-data value."""
        assert report.reference is not None
        reference = report.reference[0]["value"]
        for cell in report.cells:
            assert abs(cell["mean"] - reference) <= 2.0 * cell["std"]
