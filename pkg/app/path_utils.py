#!/usr/bin/env python3
"""
Path Utilities - resolve config-relative paths and project locations

Paths in config.yaml are relative to the app/ directory; anything given on
the command line is relative to the working directory.
"""

from pathlib import Path
from typing import Optional, Union


def get_app_dir() -> Path:
    """Directory holding the app package (and config.yaml)"""
    return Path(__file__).parent


def resolve_path(relative_path: Union[str, Path], base_dir: Optional[Path] = None) -> Path:
    """
    Resolve a path from config against base_dir (default: app/).

    Absolute paths are returned unchanged.
    """
    path = Path(relative_path).expanduser()
    if path.is_absolute():
        return path
    return ((base_dir or get_app_dir()) / path).resolve()


def default_config_path() -> Path:
    return get_app_dir() / "config.yaml"
