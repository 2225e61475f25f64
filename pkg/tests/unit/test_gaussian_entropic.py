"""Unit tests for the entropic closed forms in src/kgmm/gaussian/entropic.py."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kgmm.gaussian.closed_form import Gaussian, GaussianError, w2_squared
from kgmm.gaussian.entropic import (
    ConvergenceError,
    EntropicParams,
    covariance_product_spectrum,
    entropic_barycenter,
    entropic_cross_term,
    entropic_interpolate,
    entropic_w2_squared,
    entropic_w2_squared_sigma,
)
from kgmm.kernel.core import psd_sqrt

STANDARD = Gaussian.from_params([0.0], [[1.0]])


def _random_gaussian(rng: np.random.Generator, dim: int) -> Gaussian:
    a = rng.normal(size=(dim, dim))
    return Gaussian.from_params(rng.normal(size=dim), a @ a.T + 0.05 * np.eye(dim))


def _fixed_point_gap(gs: list[Gaussian], weights: list[float], epsilon: float, cov: np.ndarray) -> float:
    d = cov.shape[0]
    root = psd_sqrt(cov)
    mapped = np.zeros((d, d))
    for weight, g in zip(weights, gs):
        inner = np.eye(d) + (16.0 / epsilon**2) * (root @ g.cov @ root)
        mapped += weight * (-np.eye(d) + psd_sqrt((inner + inner.T) / 2.0))
    mapped = epsilon / 4.0 * mapped
    return float(np.linalg.norm((mapped + mapped.T) / 2.0 - cov, "fro"))


class TestEntropicParams:
    """Tests for EntropicParams."""

    def test_exactly_one_strength(self) -> None:
        """Test that exactly one of epsilon and sigma2 must be set."""
        with pytest.raises(GaussianError, match="Exactly one"):
            EntropicParams()
        with pytest.raises(GaussianError, match="Exactly one"):
            EntropicParams(epsilon=1.0, sigma2=0.5)

    def test_rejects_non_positive(self) -> None:
        """Test that the strength must be positive."""
        with pytest.raises(GaussianError):
            EntropicParams(epsilon=0.0)
        with pytest.raises(GaussianError):
            EntropicParams(sigma2=-1.0)

    def test_as_epsilon(self) -> None:
        """Test epsilon = 2 sigma^2."""
        assert EntropicParams(sigma2=0.75).as_epsilon == 1.5
        assert EntropicParams(epsilon=3.0).as_epsilon == 3.0


class TestEntropicW2:
    """Tests for the epsilon and sigma forms of the entropic distance."""

    def test_scalar_epsilon_form(self) -> None:
        """Test C0 = C1 = 1, epsilon = 2."""
        assert entropic_w2_squared(STANDARD, STANDARD, 2.0) == pytest.approx(1.24514, abs=1e-5)

    def test_scalar_sigma_form(self) -> None:
        """Test C0 = C1 = 1, sigma^2 = 1."""
        assert entropic_w2_squared_sigma(STANDARD, STANDARD, 1.0) == pytest.approx(1.24514, abs=1e-5)

    def test_zero_covariance_product(self) -> None:
        """Test that C0 C1 = 0 leaves the squared mean distance plus traces."""
        g0 = Gaussian.from_params([0.0, 0.0], np.zeros((2, 2)))
        g1 = Gaussian.from_params([1.0, 2.0], np.diag([0.5, 0.25]))
        expected = 5.0 + 0.75
        assert entropic_w2_squared(g0, g1, 1.3) == pytest.approx(expected, rel=1e-12)
        assert entropic_w2_squared_sigma(g0, g1, 0.65) == pytest.approx(expected, rel=1e-12)

    def test_forms_agree(self) -> None:
        """Test that sigma^2 = epsilon / 2 gives the same value."""
        rng = np.random.default_rng(21)
        for _ in range(100):
            dim = int(rng.integers(1, 4))
            g0, g1 = _random_gaussian(rng, dim), _random_gaussian(rng, dim)
            epsilon = float(10 ** rng.uniform(-2, 2))
            left = entropic_w2_squared(g0, g1, epsilon)
            right = entropic_w2_squared_sigma(g0, g1, epsilon / 2.0)
            assert left == pytest.approx(right, rel=1e-10, abs=1e-10)

    def test_small_epsilon_approaches_w2(self) -> None:
        """Test convergence to W2^2 as epsilon shrinks."""
        g0 = Gaussian.from_params([0.0, 0.0], np.diag([1.0, 2.0]))
        g1 = Gaussian.from_params([1.0, 1.0], [[2.0, 0.5], [0.5, 1.0]])
        exact = w2_squared(g0, g1)
        assert abs(entropic_w2_squared(g0, g1, 1e-3) - exact) <= 0.05 * exact

    def test_rejects_non_positive(self) -> None:
        """Test that epsilon and sigma^2 must be positive."""
        with pytest.raises(GaussianError):
            entropic_w2_squared(STANDARD, STANDARD, 0.0)
        with pytest.raises(GaussianError):
            entropic_w2_squared_sigma(STANDARD, STANDARD, -1.0)


class TestEntropicCrossTerm:
    """Tests for the shared spectral reduction."""

    def test_matches_input_space_form(self) -> None:
        """Test that the spectral form reproduces the closed-form B term."""
        rng = np.random.default_rng(23)
        g0, g1 = _random_gaussian(rng, 3), _random_gaussian(rng, 3)
        spectrum = covariance_product_spectrum(g0.cov, g1.cov)
        base = float(np.sum((g0.mean - g1.mean) ** 2) + np.trace(g0.cov) + np.trace(g1.cov))
        value = base - entropic_cross_term(spectrum, 0.7, 3)
        assert value == pytest.approx(entropic_w2_squared(g0, g1, 0.7), rel=1e-12)

    def test_zero_modes_cancel(self) -> None:
        """Test that padding with zero eigenvalues leaves the term unchanged."""
        assert entropic_cross_term([2.0, 0.5], 1.0, 2) == pytest.approx(
            entropic_cross_term([2.0, 0.5], 1.0, 7), abs=1e-14
        )
        assert entropic_cross_term([], 1.0, 5) == pytest.approx(0.0, abs=1e-14)

    def test_rejects_dimension_below_rank(self) -> None:
        """Test that dim must cover the spectrum."""
        with pytest.raises(GaussianError, match="smaller"):
            entropic_cross_term([1.0, 2.0], 1.0, 1)


class TestEntropicInterpolate:
    """Tests for entropic_interpolate."""

    def test_endpoints(self) -> None:
        """Test that t = 0 and t = 1 give C0 and C1."""
        rng = np.random.default_rng(24)
        g0, g1 = _random_gaussian(rng, 2), _random_gaussian(rng, 2)
        assert_allclose(entropic_interpolate(g0, g1, 0.0, 0.5).cov, g0.cov, atol=1e-12)
        assert_allclose(entropic_interpolate(g0, g1, 1.0, 0.5).cov, g1.cov, atol=1e-12)
        assert_allclose(entropic_interpolate(g0, g1, 0.0, 0.5).mean, g0.mean)
        assert_allclose(entropic_interpolate(g0, g1, 1.0, 0.5).mean, g1.mean)

    def test_scalar_midpoint(self) -> None:
        """Test C0 = C1 = 1, epsilon = 4, t = 0.5."""
        mid = entropic_interpolate(STANDARD, STANDARD, 0.5, 4.0)
        assert mid.cov[0, 0] == pytest.approx(1.20711, abs=1e-5)

    def test_rejects_time_outside_unit_interval(self) -> None:
        """Test that t must lie in [0, 1]."""
        with pytest.raises(GaussianError):
            entropic_interpolate(STANDARD, STANDARD, 1.2, 1.0)


class TestEntropicBarycenter:
    """Tests for the entropic barycenter fixed point."""

    def test_single_gaussian_fixed_point(self) -> None:
        """Test that the returned scalar covariance solves the fixed point."""
        epsilon, c1 = 0.8, 2.0
        result = entropic_barycenter([Gaussian.from_params([1.0], [[c1]])], [1.0], epsilon)
        c = result.gaussian.cov[0, 0]
        mapped = epsilon / 4.0 * (-1.0 + np.sqrt(1.0 + 16.0 * c * c1 / epsilon**2))
        assert c == pytest.approx(mapped, abs=1e-9)
        assert result.residual <= 1e-10
        assert result.gaussian.mean[0] == pytest.approx(1.0)

    def test_small_epsilon_limit(self) -> None:
        """Test that a tiny epsilon recovers the input covariance."""
        result = entropic_barycenter([STANDARD], [1.0], 1e-4)
        assert result.gaussian.cov[0, 0] == pytest.approx(1.0, abs=1e-3)

    def test_identical_inputs(self) -> None:
        """Test that identical Gaussians give the single-input answer."""
        g = Gaussian.from_params([0.5, -1.0], [[1.0, 0.2], [0.2, 0.5]])
        single = entropic_barycenter([g], [1.0], 0.5)
        triple = entropic_barycenter([g, g, g], [0.2, 0.3, 0.5], 0.5)
        assert_allclose(triple.gaussian.mean, g.mean, atol=1e-12)
        assert_allclose(triple.gaussian.cov, single.gaussian.cov, atol=1e-9)

    def test_weighted_mean(self) -> None:
        """Test that the barycenter mean is the weighted mean."""
        g0 = Gaussian.from_params([0.0], [[1.0]])
        g1 = Gaussian.from_params([4.0], [[1.0]])
        result = entropic_barycenter([g0, g1], [0.25, 0.75], 1.0)
        assert result.gaussian.mean[0] == pytest.approx(3.0)

    def test_damping_reaches_same_point(self) -> None:
        """Test that damping changes the path, not the limit."""
        rng = np.random.default_rng(25)
        gs = [_random_gaussian(rng, 2) for _ in range(3)]
        plain = entropic_barycenter(gs, [0.2, 0.3, 0.5], 1.0)
        damped = entropic_barycenter(gs, [0.2, 0.3, 0.5], 1.0, max_iter=5000, damping=0.5)
        assert_allclose(damped.gaussian.cov, plain.gaussian.cov, atol=1e-8)
        assert damped.iterations > plain.iterations

    def test_reports_non_convergence(self) -> None:
        """Test that hitting max_iter raises with the last iterate attached."""
        rng = np.random.default_rng(26)
        gs = [_random_gaussian(rng, 2) for _ in range(2)]
        with pytest.raises(ConvergenceError) as info:
            entropic_barycenter(gs, [0.5, 0.5], 1.0, max_iter=1, tol=1e-300)
        assert info.value.residual > 0.0
        assert info.value.last.dim == 2

    def test_residual_is_fixed_point_gap_under_damping(self) -> None:
        """Test that a damped run reports the undamped gap of what it returns."""
        rng = np.random.default_rng(27)
        gs = [_random_gaussian(rng, 2) for _ in range(3)]
        w = [0.2, 0.3, 0.5]
        result = entropic_barycenter(gs, w, 1.0, max_iter=5000, damping=0.9)
        gap = _fixed_point_gap(gs, w, 1.0, result.gaussian.cov)
        assert result.residual <= 1e-10
        assert gap <= 1e-10
        assert result.residual == pytest.approx(gap, abs=1e-12)

    def test_non_convergence_residual_matches_attached_iterate(self) -> None:
        """Test that the raised residual is the gap of the attached covariance."""
        rng = np.random.default_rng(28)
        gs = [_random_gaussian(rng, 2) for _ in range(2)]
        with pytest.raises(ConvergenceError) as info:
            entropic_barycenter(gs, [0.5, 0.5], 1.0, max_iter=3, tol=1e-300, damping=0.5)
        gap = _fixed_point_gap(gs, [0.5, 0.5], 1.0, info.value.last.cov)
        assert info.value.residual == pytest.approx(gap, rel=1e-9)

    @pytest.mark.parametrize(
        "weights,damping",
        [([0.5, 0.6], 0.0), ([-0.5, 1.5], 0.0), ([1.0], 0.0), ([0.5, 0.5], 1.0)],
    )
    def test_rejects_invalid_arguments(self, weights: list[float], damping: float) -> None:
        """Test validation of weights and damping."""
        with pytest.raises(GaussianError):
            entropic_barycenter([STANDARD, STANDARD], weights, 1.0, damping=damping)
