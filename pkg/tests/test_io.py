import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from vvixsv.io import read_csv, read_json, write_csv, write_json


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=True, allow_infinity=False), min_size=1, max_size=30))
def test_csv_float_roundtrip(tmp_path_factory, values):
    p = tmp_path_factory.mktemp("io") / "x.csv"
    write_csv(p, {"v": np.array(values)}, {"seed": 1})
    cols, meta = read_csv(p)
    got = cols["v"]
    for a, b in zip(values, got):
        assert (math.isnan(a) and math.isnan(b)) or a == b
    assert meta == {"seed": "1"}


def test_csv_mixed_columns(tmp_path):
    p = write_csv(tmp_path / "m.csv", {"name": ["a", "b"], "n": np.array([1, 2]), "flag": np.array([True, False])}, {})
    cols, _ = read_csv(p)
    assert list(cols["name"]) == ["a", "b"]
    np.testing.assert_array_equal(cols["n"], [1.0, 2.0])
    np.testing.assert_array_equal(cols["flag"], [1.0, 0.0])


def test_csv_rejects_ragged(tmp_path):
    import pytest

    with pytest.raises(ValueError):
        write_csv(tmp_path / "r.csv", {"a": [1, 2], "b": [1]}, {})


def test_json_is_sorted_and_nan_safe(tmp_path):
    p = write_json(tmp_path / "d.json", {"b": float("nan"), "a": np.float64(1.5), "c": np.arange(2)}, {"seed": 3})
    doc = read_json(p)
    assert doc == {"a": 1.5, "b": None, "c": [0, 1], "seed": 3}
    assert p.read_text().index('"a"') < p.read_text().index('"b"')
