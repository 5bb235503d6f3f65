"""Loading daily VIX/VVIX series from CSV."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Malformed input; ``row`` is the 1-based data row when known."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


@dataclass
class ObservedSeries:
    """Aligned daily observations.

    ``y = ln(vix)`` and ``vvix_sq = (vvix / 100)²``.  Series read from a
    simulator CSV carry ``y``/``vvix_sq`` verbatim and have no dates; the
    level columns are then derived from them.
    """

    dates: np.ndarray | None
    vix: np.ndarray
    vvix: np.ndarray
    y: np.ndarray
    vvix_sq: np.ndarray

    def __len__(self) -> int:
        return len(self.y)

    @property
    def T(self) -> int:
        return len(self.y) - 2

    @classmethod
    def from_levels(cls, vix, vvix, dates=None) -> "ObservedSeries":
        vix = np.asarray(vix, dtype=float)
        vvix = np.asarray(vvix, dtype=float)
        if vix.shape != vvix.shape:
            raise DataError("vix and vvix must have equal length")
        if np.any(~(vix > 0)) or np.any(~(vvix > 0)):
            raise DataError("vix and vvix must be positive")
        return cls(dates=dates, vix=vix, vvix=vvix, y=np.log(vix), vvix_sq=(vvix / 100.0) ** 2)

    @classmethod
    def from_model(cls, y, vvix_sq) -> "ObservedSeries":
        y = np.asarray(y, dtype=float)
        vvix_sq = np.asarray(vvix_sq, dtype=float)
        with np.errstate(invalid="ignore"):
            vvix = 100.0 * np.sqrt(vvix_sq)
        return cls(dates=None, vix=np.exp(y), vvix=vvix, y=y, vvix_sq=vvix_sq)


LEVEL_COLUMNS = ("date", "vix", "vvix")
MODEL_COLUMNS = ("y", "vvix_sq")


def _number(text: str, row: int, column: str, allow_missing=False) -> float:
    text = text.strip()
    if text == "" or text.lower() == "nan":
        if allow_missing:
            return math.nan
        raise DataError(f"missing value in column {column!r}", row)
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"cannot parse {column}={text!r} as a number", row) from None
    if not math.isfinite(value):
        raise DataError(f"non-finite {column}={text!r}", row)
    return value


def _date(text: str, row: int) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise DataError(f"cannot parse date {text!r} (expected YYYY-MM-DD)", row) from None


def ingest_csv(path) -> ObservedSeries:
    """Read either a ``date,vix,vvix`` file or a simulator output CSV.

    Level files must have strictly increasing ISO dates and positive values.
    Simulator files (columns ``y`` and ``vvix_sq``) may leave VVIX² blank on
    the first and last day, where the model does not observe it.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))]
    if not rows:
        raise DataError("empty input file")
    header = [h.strip().lower() for h in rows[0]]
    body = rows[1:]
    if all(c in header for c in LEVEL_COLUMNS):
        return _read_levels(header, body)
    if all(c in header for c in MODEL_COLUMNS):
        return _read_model(header, body)
    raise DataError(f"header must contain {LEVEL_COLUMNS} or {MODEL_COLUMNS}, got {header}")


def _cells(header, record, row):
    if len(record) != len(header):
        raise DataError(f"expected {len(header)} fields, got {len(record)}", row)
    return dict(zip(header, record))


def _read_levels(header, body) -> ObservedSeries:
    dates, vix, vvix = [], [], []
    for k, record in enumerate(body, start=1):
        cells = _cells(header, record, k)
        d = _date(cells["date"], k)
        v1 = _number(cells["vix"], k, "vix")
        v2 = _number(cells["vvix"], k, "vvix")
        if v1 <= 0 or v2 <= 0:
            raise DataError("vix and vvix must be positive", k)
        if dates and d <= dates[-1]:
            raise DataError(f"date {d} does not follow {dates[-1]}", k)
        dates.append(d)
        vix.append(v1)
        vvix.append(v2)
    if not dates:
        raise DataError("no data rows")
    return ObservedSeries.from_levels(vix, vvix, dates=np.array(dates, dtype="datetime64[D]"))


def _read_model(header, body) -> ObservedSeries:
    y, vsq = [], []
    for k, record in enumerate(body, start=1):
        cells = _cells(header, record, k)
        y.append(_number(cells["y"], k, "y"))
        vsq.append(_number(cells["vvix_sq"], k, "vvix_sq", allow_missing=True))
    if not y:
        raise DataError("no data rows")
    vsq = np.array(vsq)
    inner = vsq[1:-1]
    if np.any(np.isnan(inner)):
        bad = int(np.flatnonzero(np.isnan(inner))[0]) + 2
        raise DataError("vvix_sq may only be missing on the first and last day", bad)
    return ObservedSeries.from_model(y, vsq)
