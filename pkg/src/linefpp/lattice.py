"""Lattice geometry for Z^d: points, unit edges, and axis-parallel integer lines.

Points are plain tuples of Python ints.  An integer line is identified by the
axis it runs along plus the (d-1) transverse coordinates, listed in increasing
coordinate-index order.  All iteration orders here are fixed (axis ascending,
minus direction before plus, lexicographic point order) so that downstream
searches are bit-reproducible.
"""

from __future__ import annotations

import math
from typing import Iterable, List, NamedTuple, Sequence, Tuple

Point = Tuple[int, ...]

MIN_DIM = 2
MAX_DIM = 8


class LatticeError(ValueError):
    pass


class LineId(NamedTuple):
    """Identifier of one axis-parallel integer line."""

    axis: int
    transverse: Tuple[int, ...]


class Edge(NamedTuple):
    """Unit edge with canonically ordered endpoints (a <= b lexicographically)."""

    a: Point
    b: Point


def check_dim(d: int) -> int:
    if not (MIN_DIM <= d <= MAX_DIM):
        raise LatticeError(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {d}")
    return d


def l1(p: Point, q: Point | None = None) -> int:
    if q is None:
        return sum(abs(c) for c in p)
    return sum(abs(a - b) for a, b in zip(p, q))


def make_edge(a: Sequence[int], b: Sequence[int]) -> Edge:
    a = tuple(int(c) for c in a)
    b = tuple(int(c) for c in b)
    if len(a) != len(b):
        raise LatticeError(f"endpoint dimensions differ: {len(a)} vs {len(b)}")
    if l1(a, b) != 1:
        raise LatticeError(f"not a unit edge: {a} -- {b}")
    if b < a:
        a, b = b, a
    return Edge(a, b)


def line_of_edge(e: Edge) -> LineId:
    """Line containing both endpoints; axis is the unique differing coordinate."""
    a, b = e
    if len(a) != len(b) or l1(a, b) != 1:
        raise LatticeError(f"not a unit edge: {a} -- {b}")
    axis = next(i for i, (x, y) in enumerate(zip(a, b)) if x != y)
    transverse = a[:axis] + a[axis + 1 :]
    return LineId(axis, transverse)


def line_through(p: Point, axis: int) -> LineId:
    return LineId(axis, p[:axis] + p[axis + 1 :])


def lines_through(p: Point) -> List[LineId]:
    """The d distinct lines through p, axis ascending."""
    return [line_through(p, axis) for axis in range(len(p))]


def neighbors(p: Point) -> List[Point]:
    """The 2d lattice neighbors, axis ascending, minus direction before plus."""
    out = []
    for axis in range(len(p)):
        for step in (-1, 1):
            out.append(p[:axis] + (p[axis] + step,) + p[axis + 1 :])
    return out


def incident_edges(p: Point) -> List[Edge]:
    """The 2d unit edges at p, axis ascending, minus direction before plus."""
    return [make_edge(p, q) for q in neighbors(p)]


def cell_of(x: Sequence[float]) -> Point:
    """Lattice representative of a real point: componentwise floor."""
    for c in x:
        if not math.isfinite(c):
            raise LatticeError(f"non-finite coordinate {c!r}")
    return tuple(math.floor(c) for c in x)


def box_points(lo: Point, hi: Point) -> Iterable[Point]:
    """All lattice points of the box [lo, hi] (inclusive), lexicographic order."""
    if len(lo) != len(hi):
        raise LatticeError("box corners must share a dimension")
    if any(a > b for a, b in zip(lo, hi)):
        raise LatticeError(f"empty box {lo}..{hi}")

    def rec(prefix: Tuple[int, ...], k: int):
        if k == len(lo):
            yield prefix
            return
        for c in range(lo[k], hi[k] + 1):
            yield from rec(prefix + (c,), k + 1)

    return rec((), 0)


def sphere_points(center: Point, r: int) -> List[Point]:
    """Lattice points at L1 distance exactly r from center, lexicographic order.

    Used for nearest-cluster-point scans; the lexicographic order is the
    documented tie-break rule.
    """
    d = len(center)
    out: List[Point] = []

    def rec(prefix: Tuple[int, ...], k: int, rem: int):
        if k == d - 1:
            if rem == 0:
                out.append(prefix + (center[k],))
            else:
                out.append(prefix + (center[k] - rem,))
                out.append(prefix + (center[k] + rem,))
            return
        for off in range(-rem, rem + 1):
            rec(prefix + (center[k] + off,), k + 1, rem - abs(off))

    if r == 0:
        return [center]
    rec((), 0, r)
    out.sort()
    return out
