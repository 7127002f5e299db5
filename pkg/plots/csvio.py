"""Shared CSV reading for the figure scripts.

Understands the simulator's two table layouts: sweep tables
(axis,axis_value,architecture,mean_se_bps_hz,mean_ee_bps_hz_w,
mean_snr_db,trials,failures) and pattern tables (theta_deg plus one or
two value columns).  Comment lines start with ``#``.
"""

from __future__ import annotations

import csv


class CsvFormatError(Exception):
    pass


def read_table(path: str) -> tuple[list[str], list[dict]]:
    """Read a comment-prefixed CSV into (columns, row dicts)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CsvFormatError(f"{path}: no data rows")
    reader = csv.DictReader(lines)
    rows = list(reader)
    if not rows:
        raise CsvFormatError(f"{path}: header only, no data rows")
    return list(reader.fieldnames or []), rows


def require_columns(path: str, columns: list[str], needed: list[str]) -> None:
    missing = [c for c in needed if c not in columns]
    if missing:
        raise CsvFormatError(
            f"{path}: missing required columns {missing}; found {columns}")


def sweep_series(path: str, value_column: str
                 ) -> dict[str, tuple[list[float], list[float]]]:
    """Per-architecture (axis_value, value) series from a sweep CSV."""
    columns, rows = read_table(path)
    require_columns(path, columns,
                    ["axis", "axis_value", "architecture", value_column])
    series: dict[str, tuple[list[float], list[float]]] = {}
    for row in rows:
        arch = row["architecture"]
        xs, ys = series.setdefault(arch, ([], []))
        xs.append(float(row["axis_value"]))
        ys.append(float(row[value_column]))
    for xs, ys in series.values():
        order = sorted(range(len(xs)), key=xs.__getitem__)
        xs[:] = [xs[i] for i in order]
        ys[:] = [ys[i] for i in order]
    return series


def pattern_series(path: str, columns_needed: list[str]
                   ) -> dict[str, list[float]]:
    """Column vectors from a pattern CSV, keyed by column name."""
    columns, rows = read_table(path)
    require_columns(path, columns, ["theta_deg"] + columns_needed)
    out: dict[str, list[float]] = {c: [] for c in ["theta_deg"]
                                   + columns_needed}
    for row in rows:
        for c in out:
            out[c].append(float(row[c]))
    return out
