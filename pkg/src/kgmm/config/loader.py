"""Configuration file loading using ruamel.yaml."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from kgmm.utils.xdg import get_config_path


class ConfigLoadError(Exception):
    """Raised when config file cannot be loaded."""

    pass


class ConfigNotFoundError(ConfigLoadError):
    """Raised when an explicitly requested config file does not exist."""

    pass


def _create_yaml() -> YAML:
    yaml = YAML(typ="rt")  # Round-trip mode preserves comments and formatting
    yaml.preserve_quotes = True
    yaml.indent(mapping=2, sequence=4, offset=2)
    return yaml


def load_config(config_path: Optional[Path] = None) -> dict[str, Any]:
    """Load configuration from YAML file.

    Without an explicit path the default location is used, and a missing
    default file yields an empty mapping (built-in defaults apply).

    Args:
        config_path: Explicit config file path.

    Returns:
        Parsed configuration dictionary.

    Raises:
        ConfigNotFoundError: If an explicit config file does not exist.
        ConfigLoadError: If config file cannot be parsed.
    """
    if config_path is None:
        config_path = get_config_path()
        if not config_path.exists():
            return {}
    elif not config_path.exists():
        raise ConfigNotFoundError(f"Config file not found: {config_path}")

    yaml = _create_yaml()

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            data = yaml.load(f)
    except YAMLError as e:
        raise ConfigLoadError(f"Invalid YAML in config file {config_path}: {e}") from e
    except OSError as e:
        raise ConfigLoadError(f"Cannot read config file {config_path}: {e}") from e

    if data is None:
        # Empty file or only comments
        return {}

    if not isinstance(data, dict):
        raise ConfigLoadError(
            f"Config file must contain a mapping, got {type(data).__name__}"
        )

    return dict(data)


def config_exists(config_path: Optional[Path] = None) -> bool:
    if config_path is None:
        config_path = get_config_path()
    return config_path.exists()


DEFAULT_CONFIG_TEMPLATE = """\
# kgmm configuration
# ==================
#
# Location: {config_path}
# Command-line flags override every value below.

# Kernel: rbf (uses gamma), linear, or polynomial (uses degree and offset)
kernel: rbf
gamma: 1.0
# degree: 2
# offset: 1.0

# Seed of every random draw (generation, subsampling)
seed: 0

# Ambient dimension l of the entropic RKHS forms: rank, span or fixed:<n>
l_policy: rank

# Threads for Gram blocks, cost matrices and subsampling repeats
workers: 1

# Output directory template
# ===========================
#
#   command()        - running command, e.g. "sweep"
#   gamma()          - RBF width, e.g. "10.0"
#   seed()           - seed of the run
#   kernel()         - kernel description with ":" replaced by "-", e.g. "rbf-1.0"
#   tag(name)        - value of --tag name=value (empty string if absent)
#   tag_exist(name)  - True if --tag name was given
#   time_id(fmt)     - timestamp, default format "%Y%m%d-%H%M.%S"
#
# Use (( and )) for literal parentheses. --out DIR bypasses the template.
output: runs/command()/seed-seed()

# Probability tables: each weight vector is used for both mixtures
sweep_gammas: [1.0, 10.0]
weight_grid:
  - [0.1, 0.9]
  - [0.3, 0.7]
  - [0.5, 0.5]
  - [0.7, 0.3]
  - [0.9, 0.1]

# Subsampling experiments: every combination of these weights, per size
sample_weights:
  - [0.1, 0.9]
  - [0.5, 0.5]
  - [0.9, 0.1]
samples: [200, 400, 600, 800]
repeats: 100

# Interpolation grids
t_values: [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
grid:
  lo: -0.2
  hi: 1.2
  points: 512

# Generated datasets (kgmm gen --name dataset1)
# datasets:
#   dataset1:
#     components:
#       - mean: [-2.0, 0.0]
#         cov_scale: 0.4
#         count: 500
#       - mean: [2.0, 0.0]
#         cov_scale: 0.4
#         count: 500

# Input-space mixtures (kgmm interp, kgmm entropic --input-space)
# mixtures:
#   mu0:
#     components:
#       - mean: [0.2]
#         cov: [[0.002]]
#         weight: 0.3
#       - mean: [0.4]
#         cov: [[0.004]]
#         weight: 0.7
"""


def get_default_config(config_path: Optional[Path] = None) -> str:
    """Default configuration file content, documenting its own location."""
    if config_path is None:
        config_path = get_config_path()
    return DEFAULT_CONFIG_TEMPLATE.format(config_path=config_path)
