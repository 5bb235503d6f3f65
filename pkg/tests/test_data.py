from pathlib import Path

import numpy as np
import pytest

from vvixsv.data import DataError, ObservedSeries, ingest_csv

DATA = Path(__file__).parent / "data"


def write(tmp_path, text):
    p = tmp_path / "in.csv"
    p.write_text(text)
    return p


def test_three_clean_rows():
    s = ingest_csv(DATA / "levels.csv")
    assert len(s) == 3 and s.T == 1
    np.testing.assert_allclose(s.y, np.log([12.04, 11.51, 12.14]))
    np.testing.assert_allclose(s.vvix_sq, (np.array([71.50, 70.02, 72.31]) / 100) ** 2)
    assert str(s.dates[0]) == "2007-01-03"


@pytest.mark.parametrize(
    "body,row",
    [
        ("2007-01-03,12,70\n2007-01-04,-1,70\n", 2),
        ("2007-01-03,12,70\n2007-01-04,12,0\n", 2),
        ("2007-01-03,12,70\n2007-01-03,12,70\n", 2),
        ("2007-01-03,12,70\n2007-01-02,12,70\n", 2),
        ("2007-01-03,12,70\nnot-a-date,12,70\n", 2),
        ("2007-01-03,12,70\n2007-01-04,abc,70\n", 2),
        ("2007-01-03,,70\n", 1),
        ("2007-01-03,12\n", 1),
    ],
)
def test_rejections_carry_row(tmp_path, body, row):
    with pytest.raises(DataError) as err:
        ingest_csv(write(tmp_path, "date,vix,vvix\n" + body))
    assert err.value.row == row
    assert f"row {row}" in str(err.value)


def test_bad_header_and_missing_file(tmp_path):
    with pytest.raises(DataError):
        ingest_csv(write(tmp_path, "a,b\n1,2\n"))
    with pytest.raises(DataError):
        ingest_csv(write(tmp_path, ""))
    with pytest.raises(DataError):
        ingest_csv(tmp_path / "nope.csv")


def test_simulator_file():
    s = ingest_csv(DATA / "synthetic50.csv")
    assert len(s) == 50 and s.dates is None
    assert np.isnan(s.vvix_sq[0]) and np.isnan(s.vvix_sq[-1])
    assert np.all(np.isfinite(s.vvix_sq[1:-1]))


def test_simulator_file_gap_rejected(tmp_path):
    text = "y,vvix_sq\n3.0,\n3.1,0.5\n3.2,\n3.0,0.4\n3.1,\n"
    with pytest.raises(DataError) as err:
        ingest_csv(write(tmp_path, text))
    assert err.value.row == 3


def test_from_levels_validation():
    with pytest.raises(DataError):
        ObservedSeries.from_levels([1.0, 2.0], [1.0])
    with pytest.raises(DataError):
        ObservedSeries.from_levels([1.0, 0.0], [1.0, 1.0])
