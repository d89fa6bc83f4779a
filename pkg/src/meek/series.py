"""CSV/JSON writers and readers for flat numeric series records.

Floats are written with ``repr`` so a write/read/write cycle is a fixpoint.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _parse(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def to_csv(records: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if columns is None:
        columns = list(records[0]) if records else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def from_csv(text: str) -> list[dict]:
    return [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def to_json(records: Sequence[dict]) -> str:
    return json.dumps([{k: _json_safe(v) for k, v in r.items()} for r in records], indent=2) + "\n"


def from_json(text: str) -> list[dict]:
    fix = lambda v: float(v) if v in ("inf", "-inf") else v  # noqa: E731
    return [{k: fix(v) for k, v in r.items()} for r in json.loads(text)]


def dump(records: Sequence[dict], fmt: str, columns: Sequence[str] | None = None) -> str:
    if fmt == "csv":
        return to_csv(records, columns)
    if fmt == "json":
        return to_json(records)
    raise ValueError(f"format must be csv or json, got {fmt!r}")


def load(text: str, fmt: str) -> list[dict]:
    if fmt == "csv":
        return from_csv(text)
    if fmt == "json":
        return from_json(text)
    raise ValueError(f"format must be csv or json, got {fmt!r}")


def tag(records: Iterable[dict], **extra) -> list[dict]:
    """Prefix every record with constant columns (e.g. the sweep value)."""
    return [{**extra, **r} for r in records]
