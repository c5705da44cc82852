"""ScanTable serialization round trips."""

import numpy as np
import pytest

from twistlab.tables import ScanTable


def sample_table():
    t = ScanTable(["r", "value"], metadata={"mode": "demo", "points": 2})
    t.append(0.1, 1.5)
    t.append(1.0, -0.25)
    return t


def test_append_checks_arity():
    t = ScanTable(["a", "b"])
    with pytest.raises(ValueError):
        t.append(1)


def test_column_and_sort():
    t = sample_table()
    assert t.column("value") == [1.5, -0.25]
    s = t.sorted_by("value")
    assert s.rows[0][1] == -0.25
    assert t.rows[0][1] == 1.5  # original untouched


def test_json_round_trip():
    t = sample_table()
    back = ScanTable.from_json_text(t.to_json_text())
    assert back.columns == t.columns
    assert back.metadata == t.metadata
    np.testing.assert_allclose(back.rows, t.rows)


def test_csv_layout():
    text = sample_table().to_csv_text()
    lines = text.splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    assert any("mode" in ln for ln in meta)
    header = lines[len(meta)]
    assert header == "r,value"
    assert len(lines) == len(meta) + 1 + 2


def test_write_and_read(tmp_path):
    t = sample_table()
    p = tmp_path / "out.json"
    t.write(p, "json")
    assert ScanTable.read_json(p).rows == t.rows
    c = tmp_path / "out.csv"
    t.write(c, "csv")
    assert c.read_text() == t.to_csv_text()
