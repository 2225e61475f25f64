"""Unit tests for mixture geodesics and densities."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import trapezoid

from kgmm.experiments.interp import EXAMPLE_MIXTURES
from kgmm.gaussian.closed_form import Gaussian, GaussianError
from kgmm.mixture.geodesic import (
    MixtureGeodesic,
    density,
    geodesic,
    grid_transport_interpolation,
    scaling_check,
)
from kgmm.mixture.models import GaussianMixture, MixtureError

MU0 = EXAMPLE_MIXTURES["mu0"]
MU1 = EXAMPLE_MIXTURES["mu1"]


class TestMixtureGeodesic:
    """Tests for MixtureGeodesic and geodesic()."""

    def test_endpoints_have_endpoint_densities(self) -> None:
        """Test that t = 0 and t = 1 reproduce the endpoint densities."""
        grid = np.linspace(-0.2, 1.2, 200)
        assert_allclose(density(geodesic(MU0, MU1, 0.0), grid), density(MU0, grid), atol=1e-9)
        assert_allclose(density(geodesic(MU0, MU1, 1.0), grid), density(MU1, grid), atol=1e-9)

    def test_pairs_follow_plan(self) -> None:
        """Test that each positive plan entry yields one component."""
        path = MixtureGeodesic.between(MU0, MU1)
        pairs = path.pairs()
        mid = path.at(0.5)
        assert mid.size == len(pairs)
        assert_allclose(mid.weights, [path.plan.pi[i, j] for i, j in pairs])

    def test_distance(self) -> None:
        """Test that the geodesic carries the mixture distance."""
        path = MixtureGeodesic.between(MU0, MU1)
        assert path.distance == pytest.approx(np.sqrt(path.plan.objective))

    def test_rejects_time_outside_unit_interval(self) -> None:
        """Test that t must lie in [0, 1]."""
        with pytest.raises(GaussianError):
            geodesic(MU0, MU1, 1.5)

    def test_scaling_law(self) -> None:
        """Test d(mu_s, mu_t) = (t - s) d(mu0, mu1) on random time pairs."""
        rng = np.random.default_rng(71)
        for _ in range(50):
            s, t = np.sort(rng.uniform(0.0, 1.0, size=2))
            if t - s < 1e-6:
                continue
            actual, expected = scaling_check(MU0, MU1, float(s), float(t))
            assert actual == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("s,t", [(0.5, 0.5), (0.7, 0.2), (-0.1, 0.5), (0.0, 1.1)])
    def test_scaling_check_rejects_times(self, s: float, t: float) -> None:
        """Test that 0 <= s < t <= 1 is required."""
        with pytest.raises(MixtureError):
            scaling_check(MU0, MU1, s, t)


class TestDensity:
    """Tests for density()."""

    def test_standard_normal_peak(self) -> None:
        """Test the standard normal density at zero."""
        mu = GaussianMixture.of([Gaussian.from_params(0.0, 1.0)], [1.0])
        assert density(mu, [0.0])[0] == pytest.approx(0.398942, abs=1e-6)

    def test_integrates_to_one(self) -> None:
        """Test that the two-component density carries unit mass."""
        grid = np.linspace(-0.2, 1.2, 4001)
        assert trapezoid(density(MU0, grid), grid) == pytest.approx(1.0, abs=1e-3)

    def test_two_dimensional_grid(self) -> None:
        """Test evaluation on (k, d) points."""
        mu = GaussianMixture.of([Gaussian.from_params([0.0, 0.0], np.eye(2))], [1.0])
        values = density(mu, [[0.0, 0.0], [1.0, 0.0]])
        assert values[0] == pytest.approx(1.0 / (2.0 * np.pi))
        assert values[1] == pytest.approx(np.exp(-0.5) / (2.0 * np.pi))

    def test_grid_shape_mismatch(self) -> None:
        """Test that the grid must match the mixture dimension."""
        with pytest.raises(MixtureError, match="dimension"):
            density(MU0, [[0.0, 1.0]])


class TestGridTransportInterpolation:
    """Tests for the grid transport reconstruction."""

    GRID = np.linspace(-0.2, 1.2, 60)

    def test_start_row_is_binned_start_density(self) -> None:
        """Test that t = 0 reproduces the normalized start density."""
        series = grid_transport_interpolation(MU0, MU1, [0.0], self.GRID)
        dx = self.GRID[1] - self.GRID[0]
        m0 = density(MU0, self.GRID)
        assert_allclose(series[0] * dx, m0 / m0.sum(), atol=1e-10)

    def test_mass_is_preserved(self) -> None:
        """Test that every time slice carries unit mass."""
        series = grid_transport_interpolation(MU0, MU1, [0.0, 0.3, 0.5, 1.0], self.GRID)
        dx = self.GRID[1] - self.GRID[0]
        assert series.shape == (4, 60)
        assert_allclose(series.sum(axis=1) * dx, 1.0, atol=1e-9)
        assert np.all(series >= 0.0)

    def test_rejects_non_uniform_grid(self) -> None:
        """Test that the grid must be uniform."""
        with pytest.raises(MixtureError, match="uniform"):
            grid_transport_interpolation(MU0, MU1, [0.5], [0.0, 0.1, 0.3])

    def test_rejects_multivariate(self) -> None:
        """Test that 2-D mixtures are rejected."""
        mu = GaussianMixture.of([Gaussian.from_params([0.0, 0.0], np.eye(2))], [1.0])
        with pytest.raises(MixtureError, match="1-D"):
            grid_transport_interpolation(mu, mu, [0.5], self.GRID)

    def test_rejects_time(self) -> None:
        """Test that times must lie in [0, 1]."""
        with pytest.raises(MixtureError):
            grid_transport_interpolation(MU0, MU1, [1.5], self.GRID)
