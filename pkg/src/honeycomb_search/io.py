"""Table writers with a provenance header and atomic replacement."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__


def _cell(value):
    if isinstance(value, float) and math.isnan(value):
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _json_value(value):
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def render_table(
    columns: Sequence[str], rows: Iterable[Sequence], config: dict, fmt: str = "csv"
) -> str:
    rows = [[_json_value(v) for v in row] for row in rows]
    if fmt == "json":
        doc = {
            "artifact": "honeycomb_search",
            "version": __version__,
            "config": config,
            "columns": list(columns),
            "rows": rows,
        }
        return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# honeycomb_search {__version__}\n")
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_table(
    path: Path,
    columns: Sequence[str],
    rows: Iterable[Sequence],
    config: dict,
    fmt: str = "csv",
) -> Path:
    return write_atomic(path, render_table(columns, rows, config, fmt))


def read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    """Read back a CSV written by :func:`write_table`, skipping comments."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    columns = next(reader)
    return columns, [row for row in reader]
