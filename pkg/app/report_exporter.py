#!/usr/bin/env python3
"""
Report Exporter - polynomial files, campaign reports and trial tables

Polynomial files are JSON: {"min_degree": k (optional, <= 0), "coeffs": [[re, im], ...]}.
Campaign reports are JSON with a fixed key order and every float written
with 17 significant digits, so two runs with the same seed produce
byte-identical files. All files are written through a temporary file and
renamed into place.

Per-trial tables go to CSV (pandas) or XLSX (openpyxl).
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Font
from openpyxl.utils import get_column_letter

from app.errors import FormatError
from app.functions import AnalyticPolynomial, TrigPolynomial
from app.harness import ConjectureReport, TrialRecord
from app.version import compare_versions, get_version, is_report_compatible

logger = logging.getLogger(__name__)

Polynomial = Union[AnalyticPolynomial, TrigPolynomial]

REPORT_KEYS = ("command", "kind", "params", "seed", "trials", "failed_trials", "violations",
               "min_margin", "worst_case", "statistics", "quadrature", "elapsed_ms", "version")
DIFF_KEYS = ("kind", "params", "seed", "trials", "failed_trials", "violations", "min_margin", "worst_case")

TRIAL_COLUMNS = ["trial_index", "seed", "lhs", "rhs", "margin", "failed", "rechecked",
                 "attempts", "elapsed_ms", "error", "min_degree", "coeffs"]


def _atomic_write_text(path: Path, text: str) -> None:
    """Write text via path.tmp + replace; OSError propagates"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_name(path.name + '.tmp')
    with open(temp_file, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    temp_file.replace(path)


def _finite_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise FormatError(f"{where}: non-finite value {value!r}")
    return float(value)


def parse_polynomial(data: Any, source: str = "<data>") -> Polynomial:
    """
    Build a polynomial from the decoded JSON object.

    Raises:
        FormatError: missing or malformed fields
    """
    if not isinstance(data, dict):
        raise FormatError(f"{source}: expected a JSON object")
    if "coeffs" not in data:
        raise FormatError(f"{source}: missing 'coeffs'")
    min_degree = data.get("min_degree", 0)
    if isinstance(min_degree, bool) or not isinstance(min_degree, int) or min_degree > 0:
        raise FormatError(f"{source}: 'min_degree' must be an integer <= 0, got {min_degree!r}")
    raw = data["coeffs"]
    if not isinstance(raw, list):
        raise FormatError(f"{source}: 'coeffs' must be a list of [re, im] pairs")

    coeffs = []
    for k, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"{source}: coeffs[{k}] must be a [re, im] pair, got {pair!r}")
        coeffs.append(complex(_finite_number(pair[0], f"{source}: coeffs[{k}][0]"),
                              _finite_number(pair[1], f"{source}: coeffs[{k}][1]")))
    if min_degree == 0:
        return AnalyticPolynomial(coeffs)
    return TrigPolynomial(min_degree, coeffs)


def read_polynomial(path: Path) -> Polynomial:
    """
    Read a polynomial file.

    Returns:
        AnalyticPolynomial when min_degree is 0 (or absent), else TrigPolynomial

    Raises:
        FormatError: unreadable JSON or bad shape
        OSError: the file cannot be opened
    """
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise FormatError(f"{path}: invalid JSON ({e})") from e
    return parse_polynomial(data, str(path))


def polynomial_to_dict(f: Polynomial) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    if isinstance(f, TrigPolynomial):
        data["min_degree"] = f.min_degree
    data["coeffs"] = [[float(c.real), float(c.imag)] for c in f.coeffs]
    return data


def write_polynomial(f: Polynomial, path: Path) -> None:
    """Write a polynomial file; coefficients round trip exactly"""
    _atomic_write_text(Path(path), encode_json(polynomial_to_dict(f)) + "\n")


def format_float(value: float) -> str:
    """17 significant digits; non-finite values become null"""
    if not math.isfinite(value):
        return "null"
    return f"{value:.17g}" if not value.is_integer() or abs(value) >= 1e17 else f"{value:.1f}"


def encode_json(value: Any, indent: int = 0) -> str:
    """
    JSON text with insertion-ordered keys and 17-digit floats.

    json.dumps writes floats in shortest form, which is fine for reading
    but not the fixed form reports use.
    """
    pad = "  " * (indent + 1)
    end = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {encode_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(encode_json(v, indent + 1) for v in value) + "]"
        items = [pad + encode_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def _worst_case_dict(record: Optional[TrialRecord]) -> Optional[Dict[str, Any]]:
    if record is None:
        return None
    return {
        "trial_index": record.trial_index,
        "margin": record.margin,
        "min_degree": record.min_degree,
        "coeffs": [[float(c.real), float(c.imag)] for c in record.coeffs],
    }


def report_to_dict(report: ConjectureReport, command: str, include_timing: bool = False) -> Dict[str, Any]:
    """Report fields in their fixed order"""
    params: Dict[str, Any] = dict(report.kind.params())
    params.update(report.sampler.to_dict())
    params["tol"] = report.tol
    data = {
        "command": command,
        "kind": report.kind.tag.value,
        "params": params,
        "seed": report.sampler.master_seed,
        "trials": report.trials,
        "failed_trials": report.failed_trials,
        "violations": report.violations,
        "min_margin": report.min_margin,
        "worst_case": _worst_case_dict(report.worst_case),
        "statistics": report.statistics(),
        "quadrature": {"abs_tol": report.quadrature.abs_tol, "rel_tol": report.quadrature.rel_tol},
        "elapsed_ms": report.elapsed_ms if include_timing else None,
        "version": get_version(),
    }
    return {key: data[key] for key in REPORT_KEYS}


def write_report(report: ConjectureReport, path: Path, command: str = "test",
                 include_timing: bool = False) -> None:
    """
    Write the campaign report JSON.

    elapsed_ms is null unless include_timing, keeping reports byte-identical
    across runs and thread counts.

    Raises:
        OSError: the file cannot be written
    """
    text = encode_json(report_to_dict(report, command, include_timing)) + "\n"
    _atomic_write_text(Path(path), text)
    logger.info(f"Report written to {path}")


def read_report(path: Path) -> Dict[str, Any]:
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise FormatError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(data, dict) or "version" not in data or "kind" not in data:
        raise FormatError(f"{path}: not a campaign report")
    return data


def diff_reports(first: Dict[str, Any], second: Dict[str, Any]) -> List[str]:
    """
    Differences between two reports on the fields that describe the result.

    A version mismatch is logged as a warning but is not a difference.
    """
    try:
        if compare_versions(str(first.get("version")), str(second.get("version"))) != 0:
            logger.warning(f"Comparing reports from versions {first.get('version')} and {second.get('version')}")
    except ValueError:
        logger.warning("Report version could not be parsed")
    for report in (first, second):
        if not is_report_compatible(report.get("version")):
            logger.warning(f"Report version {report.get('version')} uses a different schema than {get_version()}")

    differences = []
    for key in DIFF_KEYS:
        if first.get(key) != second.get(key):
            differences.append(f"{key}: {first.get(key)!r} != {second.get(key)!r}")
    return differences


def trials_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """One row per trial, coefficients as a JSON string"""
    rows = []
    for record in records:
        rows.append({
            "trial_index": record.trial_index,
            "seed": record.seed,
            "lhs": record.lhs,
            "rhs": record.rhs,
            "margin": record.margin,
            "failed": record.failed,
            "rechecked": record.rechecked,
            "attempts": record.attempts,
            "elapsed_ms": record.elapsed_ms,
            "error": record.error or "",
            "min_degree": record.min_degree,
            "coeffs": json.dumps([[c.real, c.imag] for c in record.coeffs]),
        })
    return pd.DataFrame(rows, columns=TRIAL_COLUMNS)


def export_trials(records: Sequence[TrialRecord], path: Path) -> Path:
    """
    Export per-trial records to .csv or .xlsx (chosen by suffix).

    Raises:
        FormatError: unsupported suffix
    """
    path = Path(path)
    frame = trials_frame(records)
    suffix = path.suffix.lower()
    path.parent.mkdir(parents=True, exist_ok=True)
    if suffix == ".csv":
        frame.to_csv(path, index=False)
    elif suffix == ".xlsx":
        _write_trials_workbook(frame, path)
    else:
        raise FormatError(f"trial export supports .csv and .xlsx, got '{path.suffix}'")
    logger.info(f"Exported {len(frame)} trials to {path}")
    return path


def _write_trials_workbook(frame: pd.DataFrame, path: Path) -> None:
    workbook = Workbook()
    sheet = workbook.active
    sheet.title = "Trials"
    sheet.append(list(frame.columns))
    for cell in sheet[1]:
        cell.font = Font(bold=True)
    for row in frame.itertuples(index=False):
        sheet.append([_cell_value(v) for v in row])
    for index, column in enumerate(frame.columns, start=1):
        sheet.column_dimensions[get_column_letter(index)].width = max(12, len(column) + 2)
    sheet.freeze_panes = "A2"
    workbook.save(path)


def _cell_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "item"):
        return value.item()
    return value
