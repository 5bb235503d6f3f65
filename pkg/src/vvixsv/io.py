"""Deterministic CSV/JSON writers and readers for command artifacts.

Every file carries the config hash and seed: CSVs as leading ``#`` comment
lines, JSON documents as top-level keys.  Floats are written with ``repr``
so a written value parses back to the identical double.  Nothing
time-dependent is written, so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_csv(path, columns: dict, meta: dict) -> Path:
    """Write equal-length columns with ``# key=value`` provenance lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    data = [np.asarray(columns[k]) if not isinstance(columns[k], list) else columns[k] for k in names]
    n = len(data[0]) if data else 0
    if any(len(col) != n for col in data):
        raise ValueError("CSV columns must have equal length")
    with path.open("w", newline="") as fh:
        for key in sorted(meta):
            fh.write(f"# {key}={meta[key]}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([_cell(col[i]) for col in data])
    return path


def read_csv(path) -> tuple[dict[str, np.ndarray], dict[str, str]]:
    """Inverse of :func:`write_csv`; blank cells become NaN."""
    path = Path(path)
    meta = {}
    lines = []
    with path.open() as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            else:
                lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    rows = list(reader)
    cols = {}
    for j, name in enumerate(header):
        raw = [r[j] for r in rows]
        try:
            cols[name] = np.array([float(x) if x != "" else np.nan for x in raw])
        except ValueError:
            cols[name] = np.array(raw)
    return cols, meta


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return None if not math.isfinite(v) else v
    if hasattr(obj, "value") and not isinstance(obj, (int, str)):
        return obj.value
    return obj


def write_json(path, document: dict, meta: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {**_clean(meta), **_clean(document)}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    return path


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
