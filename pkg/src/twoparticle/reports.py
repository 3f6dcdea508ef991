"""Report writers. Every number is printed with 15 significant digits and
files are written atomically (temp file in the target directory, then
rename)."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .hbt import FringePattern

DIGITS = 15


def fmt(value) -> str:
    return format(float(value), f".{DIGITS}g")


def round15(value) -> float:
    return float(fmt(value))


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def table_text(columns: dict[str, list], fmt_format: str = "csv") -> str:
    """Render equal-length columns as CSV (header row first) or a JSON object
    of lists. Non-numeric cells are written verbatim."""
    names = list(columns)
    n = len(next(iter(columns.values()))) if columns else 0
    if any(len(v) != n for v in columns.values()):
        raise ValueError("columns must have equal lengths")

    def cell(v):
        return fmt(v) if isinstance(v, (float, int, np.floating, np.integer)) and not isinstance(v, bool) else str(v)

    if fmt_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([cell(columns[c][i]) for c in names])
        return buf.getvalue()
    if fmt_format == "json":
        def jval(v):
            return round15(v) if isinstance(v, (float, int, np.floating, np.integer)) and not isinstance(v, bool) else v
        return json.dumps({c: [jval(v) for v in columns[c]] for c in names}, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt_format!r}")


def write_table(path, columns: dict[str, list], fmt_format: str = "csv") -> Path:
    return atomic_write(path, table_text(columns, fmt_format))


def read_table(path) -> dict[str, list]:
    """Parse a file written by ``write_table``; numeric cells come back as floats."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    out: dict[str, list] = {h: [] for h in header}
    for row in body:
        for h, v in zip(header, row):
            try:
                out[h].append(float(v))
            except ValueError:
                out[h].append(v)
    return out


def emit_pattern(pattern: FringePattern, path, fmt_format: str = "csv") -> Path:
    """Write a fringe pattern with columns dx, density, corrected."""
    if len(pattern) == 0:
        raise ValueError("refusing to write an empty pattern")
    return write_table(path, {
        "dx": list(pattern.separations),
        "density": list(pattern.densities),
        "corrected": list(pattern.corrected),
    }, fmt_format)


def read_pattern(path, period: float = float("nan")) -> FringePattern:
    t = read_table(path)
    return FringePattern(
        separations=np.asarray(t["dx"], float),
        densities=np.asarray(t["density"], float),
        corrected=np.asarray(t["corrected"], float),
        period=period,
    )


def write_batch(batch, path, fmt_format: str = "csv") -> Path:
    """Export sampled events: columns x1,x2 (HBT) or outcome (HOM)."""
    if batch.kind == "hbt":
        cols = {"x1": batch.events[:, 0].tolist(), "x2": batch.events[:, 1].tolist()}
    else:
        cols = {"outcome": batch.outcome_labels()}
    return write_table(path, cols, fmt_format)


def write_duality(records, path, fmt_format: str = "csv") -> Path:
    return write_table(path, {
        "s": [r.overlap_modulus for r in records],
        "D": [r.D for r in records],
        "V": [r.V for r in records],
        "sum": [r.sum for r in records],
        "residual": [r.residual for r in records],
        "experiment": [r.experiment.value for r in records],
    }, fmt_format)
