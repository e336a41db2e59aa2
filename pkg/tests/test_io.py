import json
import math

import numpy as np
import pytest

from carleman.io import dumps_json, read_csv, write_csv


def test_json_is_strict_and_sorted():
    text = dumps_json({"b": np.float64(0.1), "a": [np.int64(3), np.bool_(True)], "c": math.nan, "d": np.inf})
    doc = json.loads(text)
    assert list(doc) == ["a", "b", "c", "d"]
    assert doc["a"] == [3, True] and doc["b"] == 0.1
    assert doc["c"] == "nan" and doc["d"] == "inf"


def test_csv_round_trips_floats(tmp_path):
    vals = [0.1, 1 / 3, -2.5e-300, 123456789.123]
    path = tmp_path / "x.csv"
    write_csv(["k", "v_rad"], [(i, v) for i, v in enumerate(vals)], path)
    header, rows = read_csv(path)
    assert header == ["k", "v_rad"]
    assert [r[1] for r in rows] == vals
    assert path.read_text().endswith("\n") and "\r" not in path.read_text()
