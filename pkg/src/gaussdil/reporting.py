"""CSV/JSON emission of result tables. Output is byte-stable for equal input."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Iterable, Sequence


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    if v is None:
        return ""
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "item") and not isinstance(v, (list, dict, str)):
        return v.item()
    return v


def columns_of(rows: Sequence[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render(rows: Sequence[dict], fmt: str = "csv", columns: Sequence[str] | None = None) -> str:
    rows = list(rows)
    cols = list(columns) if columns is not None else columns_of(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_fmt(r.get(c)) for c in cols])
        return buf.getvalue()
    if fmt == "json":
        payload = [{c: _json_safe(r.get(c)) for c in cols} for r in rows]
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_atomic(text: str, path: str) -> None:
    """Write via a temporary sibling and rename, so readers never see partial files."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(rows: Iterable[dict], fmt: str = "csv", out: str | None = None,
                columns: Sequence[str] | None = None) -> str:
    """Render rows and write them to ``out`` (stdout when None or "-")."""
    text = render(list(rows), fmt, columns)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(text, out)
    return text
