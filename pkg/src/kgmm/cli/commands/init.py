"""Init config command implementation."""

from __future__ import annotations

import argparse
from pathlib import Path

from kgmm.config.loader import config_exists, get_default_config
from kgmm.utils.xdg import get_config_path


def run_init_config(args: argparse.Namespace) -> int:
    """Execute the init config command.

    Writes the documented default configuration to ``--config`` or the
    default location.

    Args:
        args: Parsed command line arguments.

    Returns:
        Exit code (0 for success).

    Raises:
        FileExistsError: If a configuration file is already there.
        OSError: If the file cannot be written.
    """
    explicit = getattr(args, "config", None)
    config_path = Path(explicit).expanduser() if explicit is not None else get_config_path()

    if config_exists(config_path):
        raise FileExistsError(f"Config file already exists at {config_path}, not overwriting")

    config_path.parent.mkdir(parents=True, exist_ok=True)
    config_path.write_text(get_default_config(config_path), encoding="utf-8")

    if not getattr(args, "quiet", False):
        print(f"Created config file: {config_path}")
    return 0
