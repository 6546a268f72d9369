"""CSV / JSON serialisation of result tables.

Infinite values are written as the string ``"INF"`` in both formats.  CSV
cells use 12 significant digits; JSON keeps full ``repr`` precision so a
round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
import numbers

INF_TOKEN = "INF"


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, str):
        return x
    v = float(x)
    if math.isinf(v):
        return INF_TOKEN if v > 0 else "-" + INF_TOKEN
    return format(v, "#.12g")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if isinstance(x, float) and math.isinf(x):
        return INF_TOKEN if x > 0 else "-" + INF_TOKEN
    if isinstance(x, float) and math.isnan(x):
        return None
    return x


def emit_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_number(row.get(c)) for c in columns])
    return buf.getvalue()


def emit_json(columns, rows, meta) -> str:
    data = [{c: row.get(c) for c in columns} for row in rows]
    return json.dumps(_jsonable({"meta": meta, "data": data}), indent=2) + "\n"


def emit(columns, rows, fmt: str = "csv", meta: dict | None = None) -> str:
    """Serialise ``rows`` (dicts keyed by ``columns``) as CSV or JSON text."""
    if fmt == "csv":
        return emit_csv(columns, rows)
    if fmt == "json":
        return emit_json(columns, rows, meta or {})
    raise ValueError(f"unknown format {fmt!r}")


def parse_json(text: str) -> dict:
    """Inverse of :func:`emit_json`, mapping ``"INF"`` back to ``inf``."""

    def back(x):
        if x == INF_TOKEN:
            return math.inf
        if x == "-" + INF_TOKEN:
            return -math.inf
        if isinstance(x, dict):
            return {k: back(v) for k, v in x.items()}
        if isinstance(x, list):
            return [back(v) for v in x]
        return x

    return back(json.loads(text))
