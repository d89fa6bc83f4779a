"""Best-overall vs best-within-band benchmark gaps from leaderboard snapshots.

Availability persists after release, so both maxima are cumulative bests
over every model released on or before a bucket's end date.
"""
from __future__ import annotations

import calendar
import csv
import datetime as dt
import io
import json
import logging
import math
import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("name", "date", "price_usd_per_mtok", "score")
EARLIEST = dt.date(2015, 1, 1)


class RecordError(ValueError):
    """One or more leaderboard rows failed validation."""

    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class EmptyBandWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModelRecord:
    name: str
    release_date: dt.date
    price_usd_per_mtok: float
    score: float
    params: float | None = None

    def __post_init__(self):
        if not self.price_usd_per_mtok > 0:
            raise ValueError(f"price must be > 0, got {self.price_usd_per_mtok}")
        if not 0 <= self.score <= 1:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")
        if self.release_date < EARLIEST:
            raise ValueError(f"release date {self.release_date} is before {EARLIEST}")
        if self.params is not None and not self.params > 0:
            raise ValueError(f"params must be > 0, got {self.params}")


@dataclass(frozen=True)
class GapPoint:
    date: dt.date
    best_overall: float
    best_in_band: float | None
    gap: float | None

    def as_record(self) -> dict:
        return {"date": self.date.isoformat(), "best_overall": self.best_overall,
                "best_in_band": self.best_in_band, "gap": self.gap}


def parse_records(source, strict: bool = True, score_scale: float = 1.0) -> list[ModelRecord]:
    """Read ``name,date,price_usd_per_mtok,score[,params]`` CSV text or file.

    With ``strict`` any bad row raises :class:`RecordError` listing every
    problem by line; otherwise bad rows are logged and skipped. Scores are
    divided by ``score_scale`` (100 for percentages).
    """
    text = source.read() if hasattr(source, "read") else source
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in REQUIRED_COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise RecordError([f"line 1: missing column(s) {', '.join(missing)}"])
    records, problems = [], []
    for row in reader:
        line = reader.line_num
        try:
            params = row.get("params")
            records.append(ModelRecord(
                name=row["name"],
                release_date=dt.date.fromisoformat(row["date"].strip()),
                price_usd_per_mtok=float(row["price_usd_per_mtok"]),
                score=float(row["score"]) / score_scale,
                params=float(params) if params not in (None, "") else None,
            ))
        except (TypeError, ValueError, AttributeError) as exc:
            problems.append(f"line {line}: {exc}")
    if problems:
        if strict:
            raise RecordError(problems)
        for p in problems:
            log.warning("skipped %s", p)
    return records


def write_records(records: Iterable[ModelRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REQUIRED_COLUMNS + ("params",))
    for r in records:
        w.writerow([r.name, r.release_date.isoformat(), repr(r.price_usd_per_mtok),
                    repr(r.score), "" if r.params is None else repr(r.params)])
    return buf.getvalue()


# --- buckets -----------------------------------------------------------------------

_MONTHS = {"monthly": 1, "quarterly": 3, "yearly": 12}


def _month_end(year: int, month: int) -> dt.date:
    return dt.date(year, month, calendar.monthrange(year, month)[1])


def bucket_ends(start: dt.date, end: dt.date, bucket: str) -> list[dt.date]:
    """Bucket end dates covering ``[start, end]``.

    ``bucket`` is ``monthly``/``quarterly``/``yearly`` (calendar-aligned
    month ends) or ``<n>d`` for n-day buckets starting at ``start``.
    """
    if bucket in _MONTHS:
        step = _MONTHS[bucket]
        # Align multi-month buckets to calendar quarters/years.
        m0 = start.month - 1
        m0 = m0 - m0 % step + step - 1
        y, m = start.year + m0 // 12, m0 % 12 + 1
        out = []
        while True:
            d = _month_end(y, m)
            out.append(d)
            if d >= end:
                return out
            m += step
            y, m = y + (m - 1) // 12, (m - 1) % 12 + 1
    m = re.fullmatch(r"(\d+)d", bucket)
    if not m or int(m.group(1)) < 1:
        raise ValueError(f"bucket must be monthly, quarterly, yearly or '<n>d', got {bucket!r}")
    n = int(m.group(1))
    out = []
    d = start + dt.timedelta(days=n - 1)
    while True:
        out.append(d)
        if d >= end:
            return out
        d += dt.timedelta(days=n)


def _cumulative_gaps(records: Sequence[ModelRecord], in_band, bucket: str,
                     end: dt.date | None) -> list[GapPoint]:
    if not records:
        raise ValueError("records must be non-empty")
    recs = sorted(records, key=lambda r: r.release_date)
    ends = bucket_ends(recs[0].release_date, end or recs[-1].release_date, bucket)
    out, i = [], 0
    best_all, best_band = -math.inf, None
    for d in ends:
        while i < len(recs) and recs[i].release_date <= d:
            r = recs[i]
            best_all = max(best_all, r.score)
            if in_band(r):
                best_band = r.score if best_band is None else max(best_band, r.score)
            i += 1
        gap = None if best_band is None else best_all - best_band
        out.append(GapPoint(d, best_all, best_band, gap))
    return out


def gap_series(records: Sequence[ModelRecord], band: tuple[float, float],
               bucket: str = "monthly", end: dt.date | None = None) -> list[GapPoint]:
    """Gap between the best score overall and the best within a $/Mtok band (inclusive)."""
    lo, hi = band
    if not lo < hi:
        raise ValueError(f"band must satisfy min < max, got {band}")
    out = _cumulative_gaps(records, lambda r: lo <= r.price_usd_per_mtok <= hi, bucket, end)
    if all(p.best_in_band is None for p in out):
        warnings.warn(f"no model priced within {lo}..{hi} $/Mtok", EmptyBandWarning, stacklevel=2)
    return out


def param_band_gap_series(records: Sequence[ModelRecord], param_threshold: float,
                          bucket: str = "monthly", end: dt.date | None = None) -> list[GapPoint]:
    """Gap against the best model with at most ``param_threshold`` parameters.

    Records without a parameter count still count towards the overall best.
    """
    if not any(r.params is not None for r in records):
        raise ValueError("no record carries a parameter count")
    return _cumulative_gaps(
        records, lambda r: r.params is not None and r.params <= param_threshold, bucket, end)


# --- output ------------------------------------------------------------------------

def gaps_to_csv(points: Iterable[GapPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "best_overall", "best_in_band", "gap"])
    for p in points:
        w.writerow([p.date.isoformat(), repr(p.best_overall),
                    "" if p.best_in_band is None else repr(p.best_in_band),
                    "" if p.gap is None else repr(p.gap)])
    return buf.getvalue()


def gaps_from_csv(text: str) -> list[GapPoint]:
    rows = csv.DictReader(io.StringIO(text))
    opt = lambda s: None if s == "" else float(s)  # noqa: E731
    return [GapPoint(dt.date.fromisoformat(r["date"]), float(r["best_overall"]),
                     opt(r["best_in_band"]), opt(r["gap"])) for r in rows]


def gaps_to_json(points: Iterable[GapPoint]) -> str:
    return json.dumps([p.as_record() for p in points], indent=2)
