"""File emission: CSV tables, PGM rasters, JSON records.

All writers go through an atomic temp-file + rename so an interrupted run
never leaves a partial file.  CSV is comma-separated with a header row, '.'
decimal separator and LF line endings; JSON is emitted with sorted keys and
no timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from typing import Dict, Iterable, List, Sequence, Tuple

from .lattice import Point


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_float(v: float) -> str:
    if v == math.inf:
        return "inf"
    return repr(float(v))


def write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n")


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(c) if isinstance(c, float) else str(c) for c in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_points_csv(path: str, points: Iterable[Point]) -> None:
    pts = sorted(points)
    if pts:
        d = len(pts[0])
        header = [f"x{i}" for i in range(d)]
    else:
        header = ["x0", "x1"]
    write_csv(path, header, pts)


def write_pgm(path: str, mask_rows: List[List[int]], comment: str = "") -> None:
    """Plain PGM (P2), maxval 1; mask_rows[0] is the TOP row of the image."""
    h = len(mask_rows)
    w = len(mask_rows[0]) if h else 0
    lines = ["P2"]
    if comment:
        lines.append("# " + comment)
    lines.append(f"{w} {h}")
    lines.append("1")
    for row in mask_rows:
        lines.append(" ".join(str(int(v)) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def ball_raster_rows(
    points, bbox: Tuple[Point, Point]
) -> List[List[int]]:
    """Rasterize a d=2 point set over its bounding box.

    Rows run top to bottom: the first row is the highest y, columns run from
    the lowest to the highest x.
    """
    (x0, y0), (x1, y1) = bbox
    rows = []
    for y in range(y1, y0 - 1, -1):
        rows.append([1 if (x, y) in points else 0 for x in range(x0, x1 + 1)])
    return rows
