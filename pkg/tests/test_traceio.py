import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit.solver import Trace
from memcrit.traceio import read_table, read_trace, trace_header, write_table, write_trace

doubles = st.floats(allow_nan=False, allow_infinity=False, width=64)


def make_trace(n_devices, rows):
    a = np.array(rows, dtype=float).reshape(-1, 3 + 2 * n_devices)
    return Trace(t=a[:, 0], v_applied=a[:, 1], v_device=a[:, 2:2 + n_devices],
                 i=a[:, 2 + n_devices], x=a[:, 3 + n_devices:], metadata={"solver": "dp54"})


def assert_same(a, b):
    for name in ("t", "v_applied", "v_device", "i", "x"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


@pytest.mark.parametrize("fmt", ["csv", "json"])
@given(nd=st.sampled_from([1, 2]), data=st.data())
def test_round_trip_is_bit_exact(tmp_path_factory, fmt, nd, data):
    n = data.draw(st.integers(1, 20))
    rows = data.draw(st.lists(doubles, min_size=n * (3 + 2 * nd), max_size=n * (3 + 2 * nd)))
    tr = make_trace(nd, rows)
    path = tmp_path_factory.mktemp("io") / f"trace.{fmt}"
    write_trace(tr, path, config_hash="abc123")
    back = read_trace(path)
    assert_same(tr, back)
    assert back.metadata["config_hash"] == "abc123"


def test_csv_layout(tmp_path):
    tr = make_trace(2, list(range(14)))
    p = write_trace(tr, tmp_path / "crs.csv", config_hash="deadbeef")
    lines = p.read_text().splitlines()
    assert lines[0] == "# config_hash=deadbeef"
    assert lines[1] == "t,v_applied,v_device_a,v_device_b,i,x_a,x_b"
    assert len(lines) == 4


def test_headers():
    assert trace_header(1) == ["t", "v_applied", "v_device_a", "i", "x_a"]
    assert len(trace_header(2)) == 7
    with pytest.raises(ValueError):
        trace_header(3)


def test_json_carries_metadata(tmp_path):
    tr = make_trace(1, [0.0, 1.0, 0.5, 1e-3, 0.1])
    tr.metadata["max_error_norm"] = np.float64(0.25)
    p = write_trace(tr, tmp_path / "t.json", config_hash="h")
    doc = json.loads(p.read_text())
    assert doc["metadata"] == {"solver": "dp54", "max_error_norm": 0.25, "config_hash": "h"}


def test_special_values_survive(tmp_path):
    tr = make_trace(1, [0.0, -0.0, 5e-324, 1.7976931348623157e308, 0.1])
    back = read_trace(write_trace(tr, tmp_path / "t.csv"))
    assert_same(tr, back)
    assert np.signbit(back.v_applied[0])


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_trace(make_trace(1, [0.0] * 5), tmp_path / "t.txt")


def test_io_errors_name_the_path(tmp_path):
    missing = tmp_path / "nowhere" / "t.csv"
    with pytest.raises(OSError, match="nowhere"):
        write_trace(make_trace(1, [0.0] * 5), missing)
    with pytest.raises(OSError, match="nowhere"):
        read_trace(missing)
    with pytest.raises(OSError, match="nowhere"):
        write_table(missing, ["a"], [[1]])


def test_table_round_trip(tmp_path):
    p = write_table(tmp_path / "k.csv", ["model", "v_p", "t_set"],
                    [["linear", 0.5, 1e-3], ["laiho", 1.0, None]], "h1")
    assert p.read_text().splitlines()[0] == "# config_hash=h1"
    header, rows = read_table(p)
    assert header == ["model", "v_p", "t_set"]
    assert rows == [["linear", "0.5", "0.001"], ["laiho", "1.0", ""]]
