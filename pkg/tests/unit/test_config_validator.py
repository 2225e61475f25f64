"""Unit tests for configuration validation in src/kgmm/config/validator.py."""

from typing import Any

import numpy as np
import pytest

from kgmm.config.validator import (
    DEFAULT_OUTPUT,
    Config,
    ConfigValidationError,
    validate_config,
    validate_weights,
)
from kgmm.kernel.core import KernelFamily
from kgmm.rkhs.entropic import AmbientPolicy


class TestDefaults:
    """Tests for the built-in defaults."""

    def test_empty_config(self) -> None:
        """Test that an empty mapping gives the defaults."""
        config = validate_config({})
        assert config.kernel.family is KernelFamily.RBF
        assert config.kernel.gamma == 1.0
        assert config.seed == 0
        assert config.output == DEFAULT_OUTPUT
        assert config.l_policy.policy is AmbientPolicy.RANK
        assert set(config.datasets) == {"dataset1", "dataset2", "dataset3"}
        assert set(config.mixtures) == {"mu0", "mu1"}

    def test_defaults_are_not_shared(self) -> None:
        """Test that default containers are per instance."""
        a, b = Config(), Config()
        a.samples.append(5)
        assert b.samples == [200, 400, 600, 800]


class TestKernel:
    """Tests for kernel fields."""

    def test_rbf_gamma(self) -> None:
        """Test gamma on the RBF kernel."""
        assert validate_config({"kernel": "rbf", "gamma": 10}).kernel.gamma == 10.0

    def test_polynomial(self) -> None:
        """Test degree and offset of the polynomial kernel."""
        spec = validate_config({"kernel": "Polynomial", "degree": 3, "offset": 0.5}).kernel
        assert spec.describe() == "polynomial:3:0.5"

    @pytest.mark.parametrize(
        "data",
        [
            {"kernel": "sigmoid"},
            {"kernel": "rbf", "gamma": 0},
            {"kernel": "rbf", "gamma": "wide"},
            {"kernel": "polynomial", "degree": 0},
            {"kernel": ""},
        ],
    )
    def test_rejects(self, data: dict[str, Any]) -> None:
        """Test invalid kernel settings."""
        with pytest.raises(ConfigValidationError):
            validate_config(data)


class TestScalars:
    """Tests for scalar and list fields."""

    def test_values(self) -> None:
        """Test that given fields override the defaults."""
        config = validate_config(
            {
                "seed": 7,
                "workers": 4,
                "l_policy": "fixed:10",
                "output": "out/kernel()",
                "sweep_gammas": [0.5],
                "samples": [10, 20],
                "repeats": 3,
                "t_values": [0, 0.5, 1],
                "grid": {"lo": 0.0, "hi": 1.0, "points": 11},
            }
        )
        assert config.seed == 7
        assert config.workers == 4
        assert config.l_policy.value == 10
        assert config.output == "out/kernel()"
        assert config.sweep_gammas == [0.5]
        assert config.samples == [10, 20]
        assert config.repeats == 3
        assert config.t_values == [0.0, 0.5, 1.0]
        assert config.grid.points == 11

    @pytest.mark.parametrize(
        "data,match",
        [
            ({"seed": -1}, "seed"),
            ({"seed": True}, "seed"),
            ({"workers": 0}, "workers"),
            ({"l_policy": "all"}, "policy"),
            ({"output": "  "}, "output"),
            ({"output": "runs/branch()"}, "Unknown function 'branch'"),
            ({"sweep_gammas": []}, "sweep_gammas"),
            ({"samples": [10, 0]}, r"samples\[1\]"),
            ({"repeats": 1.5}, "repeats"),
            ({"t_values": [0.5, 1.5]}, "t_values"),
            ({"grid": {"lo": 1.0, "hi": 0.0}}, "hi > lo"),
            ({"grid": [1, 2]}, "grid"),
        ],
    )
    def test_rejects(self, data: dict[str, Any], match: str) -> None:
        """Test that invalid values name the offending field."""
        with pytest.raises(ConfigValidationError, match=match):
            validate_config(data)


class TestWeights:
    """Tests for weight vectors."""

    def test_validate_weights(self) -> None:
        """Test a valid probability vector."""
        assert validate_weights([0.25, 0.75], "w") == (0.25, 0.75)

    @pytest.mark.parametrize("value", [[], [0.5, 0.6], [1.5, -0.5], ["a", 1.0], 0.5])
    def test_rejects(self, value: Any) -> None:
        """Test empty, unnormalized, negative and non-numeric vectors."""
        with pytest.raises(ConfigValidationError):
            validate_weights(value, "w")

    def test_grids(self) -> None:
        """Test weight_grid and sample_weights."""
        config = validate_config({"weight_grid": [[0.2, 0.8]], "sample_weights": [[1.0]]})
        assert config.weight_grid == [(0.2, 0.8)]
        assert config.sample_weights == [(1.0,)]

    def test_grid_names_entry(self) -> None:
        """Test that a bad entry is reported by index."""
        with pytest.raises(ConfigValidationError, match=r"weight_grid\[1\]"):
            validate_config({"weight_grid": [[0.5, 0.5], [0.5, 0.4]]})


class TestDatasets:
    """Tests for dataset definitions."""

    def test_dataset(self) -> None:
        """Test cov_scale and count of a configured dataset."""
        config = validate_config(
            {"datasets": {"line": {"components": [{"mean": [1.0, 2.0], "cov_scale": 0.1, "count": 7}]}}}
        )
        component = config.datasets["line"].components[0]
        assert component.count == 7
        np.testing.assert_allclose(component.cov, 0.1 * np.eye(2))
        assert "dataset1" in config.datasets

    def test_full_covariance(self) -> None:
        """Test an explicit covariance matrix."""
        config = validate_config(
            {"datasets": {"d": {"components": [{"mean": [0.0, 0.0], "cov": [[1.0, 0.5], [0.5, 1.0]]}]}}}
        )
        assert config.datasets["d"].components[0].count == 500

    @pytest.mark.parametrize(
        "component,match",
        [
            ({"cov_scale": 0.1}, "mean"),
            ({"mean": [0.0], "cov": [[1.0]], "cov_scale": 0.1}, "only one"),
            ({"mean": [0.0, 0.0], "cov": [[1.0]]}, "shape"),
            ({"mean": [0.0], "count": 0}, "count"),
        ],
    )
    def test_rejects(self, component: dict[str, Any], match: str) -> None:
        """Test invalid components."""
        with pytest.raises(ConfigValidationError, match=match):
            validate_config({"datasets": {"bad": {"components": [component]}}})


class TestMixtures:
    """Tests for mixture definitions."""

    def test_mixture(self) -> None:
        """Test a configured two-component mixture."""
        config = validate_config(
            {
                "mixtures": {
                    "pair": {
                        "components": [
                            {"mean": [0.0], "cov": [[1.0]], "weight": 0.4},
                            {"mean": [2.0], "cov_scale": 0.5, "weight": 0.6},
                        ]
                    }
                }
            }
        )
        mu = config.mixtures["pair"]
        assert mu.size == 2
        np.testing.assert_allclose(mu.weights, [0.4, 0.6])
        assert mu.components[1].cov[0, 0] == 0.5

    @pytest.mark.parametrize(
        "components,match",
        [
            ([{"mean": [0.0], "cov": [[1.0]]}], "weight"),
            ([{"mean": [0.0], "cov": [[1.0]], "weight": 0.5}], "sum"),
            ([{"mean": [0.0], "cov": [[-1.0]], "weight": 1.0}], "covariance"),
        ],
    )
    def test_rejects(self, components: list[dict[str, Any]], match: str) -> None:
        """Test invalid mixtures."""
        with pytest.raises(ConfigValidationError, match=match):
            validate_config({"mixtures": {"bad": {"components": components}}})

    def test_rejects_non_mapping(self) -> None:
        """Test that mixtures must be a mapping."""
        with pytest.raises(ConfigValidationError, match="mixtures"):
            validate_config({"mixtures": ["mu0"]})
