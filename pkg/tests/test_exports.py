import math
import os

from linefpp.exports import (
    ball_raster_rows,
    format_float,
    write_csv,
    write_json,
    write_pgm,
    write_points_csv,
)


def test_float_formatting_roundtrips():
    for v in (0.1, 1.0, 1e-300, 12345.6789):
        assert float(format_float(v)) == v
    assert format_float(math.inf) == "inf"


def test_csv_layout(tmp_path):
    path = str(tmp_path / "t.csv")
    write_csv(path, ["a", "b"], [(1, 0.5), (2, math.inf)])
    with open(path, "rb") as fh:
        data = fh.read()
    assert data == b"a,b\n1,0.5\n2,inf\n"


def test_points_csv_is_sorted(tmp_path):
    path = str(tmp_path / "p.csv")
    write_points_csv(path, [(1, 0), (-1, 2), (0, 0)])
    lines = open(path).read().splitlines()
    assert lines == ["x0,x1", "-1,2", "0,0", "1,0"]


def test_json_is_stable(tmp_path):
    p1, p2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    write_json(p1, {"b": 1, "a": [1, 2]})
    write_json(p2, {"a": [1, 2], "b": 1})
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_writes_are_atomic(tmp_path):
    path = str(tmp_path / "x.csv")
    write_csv(path, ["a"], [(1,)])
    write_csv(path, ["a"], [(2,)])  # overwrite in place
    assert open(path).read() == "a\n2\n"
    assert [n for n in os.listdir(tmp_path) if n.startswith(".tmp-")] == []


def test_raster_rows_run_top_to_bottom():
    pts = {(0, 0), (1, 1)}
    rows = ball_raster_rows(pts, ((0, 0), (1, 1)))
    assert rows == [[0, 1], [1, 0]]  # first row is y = 1


def test_pgm_header(tmp_path):
    path = str(tmp_path / "m.pgm")
    write_pgm(path, [[1, 0], [0, 1]], comment="demo")
    lines = open(path).read().splitlines()
    assert lines[0] == "P2"
    assert lines[1] == "# demo"
    assert lines[2] == "2 2"
    assert lines[3] == "1"
