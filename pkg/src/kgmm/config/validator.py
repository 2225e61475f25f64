"""Configuration validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from kgmm.experiments.generator import BUILTIN_DATASETS, ComponentSpec, DatasetSpec
from kgmm.experiments.interp import DEFAULT_T_VALUES, EXAMPLE_MIXTURES, GridSpec
from kgmm.experiments.report import ExperimentError
from kgmm.experiments.sweep import TABLE_WEIGHTS
from kgmm.gaussian.closed_form import Gaussian, GaussianError
from kgmm.kernel.core import KernelError, KernelFamily, KernelSpec
from kgmm.mixture.models import GaussianMixture, MixtureError
from kgmm.rkhs.entropic import AmbientDimension, AmbientDimensionError
from kgmm.template.evaluator import PathTemplate
from kgmm.template.functions import TemplateContext, create_function_registry

DEFAULT_OUTPUT = "runs/command()/seed-seed()"
WEIGHT_TOL = 1e-9


class ConfigValidationError(Exception):
    """Raised when config validation fails."""

    pass


@dataclass
class Config:
    """Validated configuration.

    Attributes:
        kernel: Kernel used by kw2, gmm-dist, entropic, sample-exp and bench.
        seed: Root seed of all random draws.
        l_policy: Ambient dimension policy of the entropic RKHS forms.
        output: Output directory template.
        workers: Thread count.
        sweep_gammas: RBF widths swept by the probability tables.
        weight_grid: Weight vectors of the probability tables.
        sample_weights: Weight vectors combined in subsampling experiments.
        samples: Subsample sizes.
        repeats: Subsamples per size.
        t_values: Interpolation times.
        grid: Density grid.
        datasets: Named dataset generators.
        mixtures: Named input-space mixtures.
    """

    kernel: KernelSpec = field(default_factory=KernelSpec)
    seed: int = 0
    l_policy: AmbientDimension = field(default_factory=AmbientDimension)
    output: str = DEFAULT_OUTPUT
    workers: int = 1
    sweep_gammas: list[float] = field(default_factory=lambda: [1.0, 10.0])
    weight_grid: list[tuple[float, ...]] = field(default_factory=lambda: list(TABLE_WEIGHTS))
    sample_weights: list[tuple[float, ...]] = field(
        default_factory=lambda: [(0.1, 0.9), (0.5, 0.5), (0.9, 0.1)]
    )
    samples: list[int] = field(default_factory=lambda: [200, 400, 600, 800])
    repeats: int = 100
    t_values: list[float] = field(default_factory=lambda: list(DEFAULT_T_VALUES))
    grid: GridSpec = field(default_factory=GridSpec)
    datasets: dict[str, DatasetSpec] = field(default_factory=lambda: dict(BUILTIN_DATASETS))
    mixtures: dict[str, GaussianMixture] = field(default_factory=lambda: dict(EXAMPLE_MIXTURES))


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _validate_string(value: Any, field_name: str) -> str:
    if not isinstance(value, str):
        raise ConfigValidationError(
            f"Field '{field_name}' must be a string, got {type(value).__name__}"
        )
    if not value.strip():
        raise ConfigValidationError(f"Field '{field_name}' cannot be empty")
    return value


def _validate_float(value: Any, field_name: str, positive: bool = False) -> float:
    if not _is_number(value) or not np.isfinite(value):
        raise ConfigValidationError(
            f"Field '{field_name}' must be a finite number, got {value!r}"
        )
    if positive and value <= 0:
        raise ConfigValidationError(f"Field '{field_name}' must be positive, got {value!r}")
    return float(value)


def _validate_int(value: Any, field_name: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigValidationError(
            f"Field '{field_name}' must be an integer, got {type(value).__name__}"
        )
    if minimum is not None and value < minimum:
        raise ConfigValidationError(f"Field '{field_name}' must be >= {minimum}, got {value}")
    return int(value)


def _validate_list(value: Any, field_name: str) -> list[Any]:
    if not isinstance(value, list) or not value:
        raise ConfigValidationError(f"Field '{field_name}' must be a non-empty list")
    return list(value)


def validate_weights(value: Any, field_name: str) -> tuple[float, ...]:
    """Check a probability vector: nonnegative entries summing to 1 within 1e-9.

    Raises:
        ConfigValidationError: If the vector is empty, non-numeric or not a probability vector.
    """
    weights = tuple(
        _validate_float(w, f"{field_name}[{i}]") for i, w in enumerate(_validate_list(value, field_name))
    )
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > WEIGHT_TOL:
        raise ConfigValidationError(
            f"Field '{field_name}' must be nonnegative weights summing to 1, got {list(weights)}"
        )
    return weights


def _validate_matrix(value: Any, field_name: str) -> list[list[float]]:
    rows = _validate_list(value, field_name)
    return [
        [_validate_float(v, f"{field_name}[{i}][{j}]") for j, v in enumerate(_validate_list(row, f"{field_name}[{i}]"))]
        for i, row in enumerate(rows)
    ]


def _validate_component(data: Any, context: str) -> tuple[list[float], list[list[float]] | float, dict[str, Any]]:
    """Common part of dataset and mixture components: mean plus cov or cov_scale."""
    if not isinstance(data, dict):
        raise ConfigValidationError(f"{context} must be a mapping, got {type(data).__name__}")
    if "mean" not in data:
        raise ConfigValidationError(f"{context} missing required 'mean'")
    mean = [_validate_float(v, f"{context}.mean[{i}]") for i, v in enumerate(_validate_list(data["mean"], f"{context}.mean"))]
    if "cov" in data and "cov_scale" in data:
        raise ConfigValidationError(f"{context} must set only one of 'cov' and 'cov_scale'")
    cov: list[list[float]] | float
    if "cov" in data:
        cov = _validate_matrix(data["cov"], f"{context}.cov")
    else:
        cov = _validate_float(data.get("cov_scale", 0.4), f"{context}.cov_scale", positive=True)
    return mean, cov, data


def _covariance(mean: list[float], cov: list[list[float]] | float) -> np.ndarray:
    if isinstance(cov, float):
        return cov * np.eye(len(mean))
    return np.asarray(cov, dtype=np.float64)


def _validate_dataset(name: str, data: Any) -> DatasetSpec:
    context = f"datasets.{name}"
    if not isinstance(data, dict) or "components" not in data:
        raise ConfigValidationError(f"{context} must be a mapping with 'components'")
    components = []
    for i, item in enumerate(_validate_list(data["components"], f"{context}.components")):
        item_context = f"{context}.components[{i}]"
        mean, cov, raw = _validate_component(item, item_context)
        count = _validate_int(raw.get("count", 500), f"{item_context}.count", minimum=1)
        try:
            components.append(ComponentSpec(np.asarray(mean), _covariance(mean, cov), count))
        except ExperimentError as e:
            raise ConfigValidationError(f"{item_context}: {e}") from e
    try:
        return DatasetSpec.of(components)
    except ExperimentError as e:
        raise ConfigValidationError(f"{context}: {e}") from e


def _validate_mixture(name: str, data: Any) -> GaussianMixture:
    context = f"mixtures.{name}"
    if not isinstance(data, dict) or "components" not in data:
        raise ConfigValidationError(f"{context} must be a mapping with 'components'")
    gaussians = []
    weights = []
    for i, item in enumerate(_validate_list(data["components"], f"{context}.components")):
        item_context = f"{context}.components[{i}]"
        mean, cov, raw = _validate_component(item, item_context)
        if "weight" not in raw:
            raise ConfigValidationError(f"{item_context} missing required 'weight'")
        weights.append(_validate_float(raw["weight"], f"{item_context}.weight"))
        try:
            gaussians.append(Gaussian.from_params(mean, _covariance(mean, cov)))
        except (GaussianError, KernelError) as e:
            raise ConfigValidationError(f"{item_context}: {e}") from e
    try:
        return GaussianMixture.of(gaussians, weights)
    except (MixtureError, KernelError) as e:
        raise ConfigValidationError(f"{context}: {e}") from e


def _validate_kernel(data: dict[str, Any]) -> KernelSpec:
    family = _validate_string(data.get("kernel", KernelFamily.RBF.value), "kernel").lower()
    try:
        if family == KernelFamily.RBF.value:
            return KernelSpec.rbf(_validate_float(data.get("gamma", 1.0), "gamma", positive=True))
        if family == KernelFamily.LINEAR.value:
            return KernelSpec.linear()
        if family == KernelFamily.POLYNOMIAL.value:
            return KernelSpec.polynomial(
                _validate_int(data.get("degree", 2), "degree", minimum=1),
                _validate_float(data.get("offset", 1.0), "offset"),
            )
    except KernelError as e:
        raise ConfigValidationError(str(e)) from e
    raise ConfigValidationError(
        f"Invalid kernel '{family}'. Must be one of: {', '.join(f.value for f in KernelFamily)}"
    )


def _validate_grid(data: Any) -> GridSpec:
    if not isinstance(data, dict):
        raise ConfigValidationError(f"'grid' must be a mapping, got {type(data).__name__}")
    try:
        return GridSpec(
            lo=_validate_float(data.get("lo", -0.2), "grid.lo"),
            hi=_validate_float(data.get("hi", 1.2), "grid.hi"),
            points=_validate_int(data.get("points", 512), "grid.points", minimum=2),
        )
    except ExperimentError as e:
        raise ConfigValidationError(str(e)) from e


def _validate_output(value: Any) -> str:
    """Output template whose calls all name registered template functions."""
    template = _validate_string(value, "output")
    known = create_function_registry(TemplateContext())
    for expression in PathTemplate.parse(template).calls:
        name = expression.split("(", 1)[0].strip()
        if name not in known:
            raise ConfigValidationError(
                f"Unknown function '{name}' in output template. Available: {', '.join(sorted(known))}"
            )
    return template


def _validate_named(data: Any, field_name: str) -> dict[str, Any]:
    if not isinstance(data, dict):
        raise ConfigValidationError(
            f"'{field_name}' must be a mapping, got {type(data).__name__}"
        )
    return {str(k): v for k, v in data.items()}


def validate_config(data: dict[str, Any]) -> Config:
    """Validate and parse configuration data; absent fields keep their defaults.

    Args:
        data: Raw configuration dictionary from YAML.

    Returns:
        Validated Config object.

    Raises:
        ConfigValidationError: If validation fails.
    """
    config = Config(kernel=_validate_kernel(data))

    if "seed" in data:
        config.seed = _validate_int(data["seed"], "seed", minimum=0)
    if "l_policy" in data:
        try:
            config.l_policy = AmbientDimension.parse(_validate_string(data["l_policy"], "l_policy"))
        except AmbientDimensionError as e:
            raise ConfigValidationError(str(e)) from e
    if "output" in data:
        config.output = _validate_output(data["output"])
    if "workers" in data:
        config.workers = _validate_int(data["workers"], "workers", minimum=1)
    if "sweep_gammas" in data:
        config.sweep_gammas = [
            _validate_float(g, f"sweep_gammas[{i}]", positive=True)
            for i, g in enumerate(_validate_list(data["sweep_gammas"], "sweep_gammas"))
        ]
    if "weight_grid" in data:
        config.weight_grid = [
            validate_weights(w, f"weight_grid[{i}]")
            for i, w in enumerate(_validate_list(data["weight_grid"], "weight_grid"))
        ]
    if "sample_weights" in data:
        config.sample_weights = [
            validate_weights(w, f"sample_weights[{i}]")
            for i, w in enumerate(_validate_list(data["sample_weights"], "sample_weights"))
        ]
    if "samples" in data:
        config.samples = [
            _validate_int(s, f"samples[{i}]", minimum=1)
            for i, s in enumerate(_validate_list(data["samples"], "samples"))
        ]
    if "repeats" in data:
        config.repeats = _validate_int(data["repeats"], "repeats", minimum=1)
    if "t_values" in data:
        config.t_values = [
            _validate_float(t, f"t_values[{i}]")
            for i, t in enumerate(_validate_list(data["t_values"], "t_values"))
        ]
        if any(not 0.0 <= t <= 1.0 for t in config.t_values):
            raise ConfigValidationError("Field 't_values' must lie in [0, 1]")
    if "grid" in data:
        config.grid = _validate_grid(data["grid"])
    if "datasets" in data:
        for name, spec in _validate_named(data["datasets"], "datasets").items():
            config.datasets[name] = _validate_dataset(name, spec)
    if "mixtures" in data:
        for name, spec in _validate_named(data["mixtures"], "mixtures").items():
            config.mixtures[name] = _validate_mixture(name, spec)

    return config
