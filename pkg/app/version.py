"""
Version information for the Contractive Inequality Lab
Every report records VERSION; bump the major part when report keys change
"""

from typing import Tuple

VERSION = "1.0.0"
BUILD_DATE = "2026-10-19"


def _parse(version: str) -> Tuple[int, ...]:
    """'1.2' -> (1, 2); ValueError on non-integer parts"""
    return tuple(int(part) for part in str(version).strip().split('.'))


VERSION_MAJOR, VERSION_MINOR, VERSION_PATCH = _parse(VERSION)
VERSION_STRING = f"v{VERSION}"


def get_version() -> str:
    return VERSION


def get_version_info() -> dict:
    """Version components for --version output and debugging"""
    return {
        'version': VERSION,
        'major': VERSION_MAJOR,
        'minor': VERSION_MINOR,
        'patch': VERSION_PATCH,
        'build_date': BUILD_DATE,
        'version_string': VERSION_STRING,
    }


def compare_versions(version1: str, version2: str) -> int:
    """
    Compare two dotted versions; missing trailing parts count as 0.

    Returns:
        -1, 0 or 1 as version1 is older, equal or newer

    Raises:
        ValueError: a part is not an integer
    """
    v1, v2 = _parse(version1), _parse(version2)
    width = max(len(v1), len(v2))
    v1 += (0,) * (width - len(v1))
    v2 += (0,) * (width - len(v2))
    return (v1 > v2) - (v1 < v2)


def is_report_compatible(report_version: str) -> bool:
    """Reports share a schema within one major version"""
    try:
        return _parse(report_version)[0] == VERSION_MAJOR
    except ValueError:
        return False
