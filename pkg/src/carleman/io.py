"""Deterministic JSON/CSV emission. Floats use shortest round-trip repr."""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import numpy as np


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # strict JSON has no nan/inf
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(obj, path=None) -> None:
    text = dumps_json(obj)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_rows(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])


def write_csv(header, rows, path) -> None:
    """Write a CSV series; ``path`` may be ``"-"`` for stdout."""
    if str(path) == "-":
        _write_rows(sys.stdout, header, rows)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, header, rows)


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [[float(v) for v in row] for row in r]
