"""Machine-readable output: delimited tables and single JSON records.

Table cells use the shortest repr that round-trips, positional inside
``[1e-9, 1e9)`` in magnitude and scientific outside; a ``.`` separates
decimals.  Missing values are empty cells.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np


def format_number(x: float | int | None) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0 or 1e-9 <= abs(x) < 1e9:
        return np.format_float_positional(x, unique=True, trim="0")
    return np.format_float_scientific(x, unique=True, trim="0")


def render_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    return buf.getvalue()


def parse_table(text: str) -> list[dict[str, float | None]]:
    """Inverse of :func:`render_table` for all-numeric columns."""
    reader = csv.DictReader(io.StringIO(text))
    return [{k: (float(v) if v != "" else None) for k, v in row.items()} for row in reader]


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Mapping):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def render_record(record: Mapping[str, Any]) -> str:
    """JSON with non-finite floats mapped to ``null``, stable key order as given."""
    return json.dumps(_clean(record), indent=2, allow_nan=False) + "\n"
