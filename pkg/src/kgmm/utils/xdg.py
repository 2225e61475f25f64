"""Location of the user configuration file."""

from __future__ import annotations

import os
import sys
from pathlib import Path

APP_NAME = "kgmm"

# Overrides the default configuration file location when set.
CONFIG_ENV = "KGMM_CONFIG"


def config_home() -> Path:
    """Base directory for per-user configuration.

    - Linux: $XDG_CONFIG_HOME (absolute only) or ~/.config
    - macOS: ~/Library/Application Support
    - Windows: %APPDATA% or ~/AppData/Roaming
    """
    home = Path.home()
    if sys.platform.startswith("win"):
        return Path(os.environ.get("APPDATA", str(home / "AppData" / "Roaming")))
    if sys.platform == "darwin":
        return home / "Library" / "Application Support"
    xdg = os.environ.get("XDG_CONFIG_HOME")
    if xdg and Path(xdg).is_absolute():
        return Path(xdg)
    return home / ".config"


def get_config_path(appname: str = APP_NAME) -> Path:
    """Path of config.yml, honoring the KGMM_CONFIG override.

    Args:
        appname: Application name for the config subdirectory.

    Returns:
        Configuration file path (it may not exist).
    """
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override).expanduser()
    return config_home() / appname / "config.yml"
