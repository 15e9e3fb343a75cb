"""Finite-passage-time clusters and regularized times.

When lines can be very expensive (or outright infinite), passage times between
arbitrary points are badly behaved.  The cure is to work on the cluster C_M of
lines whose weight is strictly below a threshold M: project both endpoints to
their nearest cluster vertex (L1 distance, lexicographic tie-break) and
measure the passage time between the projections using only cluster edges.
M = +inf gives the finite-line cluster and the regularized time t_star.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from . import search
from .environment import Environment
from .lattice import LineId, Point, l1, line_through, lines_through, sphere_points

DEFAULT_SCAN_CAP = 4096


class ClusterError(ValueError):
    pass


@dataclass
class ProjectionResult:
    source: Point
    projected: Point
    l1_distance: int


@dataclass
class ChemicalDistance:
    hops: float  # int when exact; frontier depth (lower bound) when truncated
    status: str
    expanded: int


@dataclass
class TildeResult:
    query: search.QueryResult
    x_proj: ProjectionResult
    y_proj: ProjectionResult


@dataclass(frozen=True)
class ClusterView:
    """The union of integer lines with weight strictly below the threshold."""

    env: Environment
    M: float

    @property
    def p_m(self) -> float:
        """Probability that a single line belongs to the cluster (strict tau < M)."""
        dist = self.env.dist
        if self.M == math.inf:
            return 1.0 - dist.p_infinity()
        return dist.cdf(self.M) - dist.mass_at(self.M)

    def line_in_cluster(self, line: LineId) -> bool:
        return self.env.tau(line) < self.M

    def in_cluster(self, p: Point) -> bool:
        return any(self.line_in_cluster(line) for line in lines_through(p))

    def threshold_arg(self) -> Optional[float]:
        # searches treat weights >= threshold as non-relaxable; +inf weights
        # are never relaxed anyway, so M = +inf needs no mask
        return self.M if math.isfinite(self.M) else None


def project(view: ClusterView, p: Point, scan_cap: int = DEFAULT_SCAN_CAP) -> ProjectionResult:
    """Nearest cluster vertex in L1 distance, lexicographic smallest on ties.

    Scans L1 spheres of growing radius; the failure probability after radius r
    decays geometrically in r, so the cap is a safety valve, not a tuning knob.
    """
    p = tuple(int(c) for c in p)
    if view.p_m <= 0.0:
        raise ClusterError("cluster is empty: no line weight falls below the threshold")
    cache: Dict[LineId, bool] = {}

    def member(q: Point) -> bool:
        for line in lines_through(q):
            ok = cache.get(line)
            if ok is None:
                ok = view.line_in_cluster(line)
                cache[line] = ok
            if ok:
                return True
        return False

    for r in range(scan_cap + 1):
        for q in sphere_points(p, r):
            if member(q):
                return ProjectionResult(p, q, r)
    raise ClusterError(f"no cluster vertex within L1 radius {scan_cap} of {p}")


def chemical_distance(
    view: ClusterView, x: Point, y: Point, budget: int = search.DEFAULT_BUDGET
) -> ChemicalDistance:
    """Hop count between cluster vertices along cluster edges (unweighted BFS)."""
    x = tuple(int(c) for c in x)
    y = tuple(int(c) for c in y)
    if not view.in_cluster(x):
        raise ClusterError(f"{x} is not in the cluster")
    if not view.in_cluster(y):
        raise ClusterError(f"{y} is not in the cluster")
    if x == y:
        return ChemicalDistance(0, search.EXACT, 0)

    d = view.env.d
    cache: Dict[LineId, bool] = {}

    def line_ok(line: LineId) -> bool:
        ok = cache.get(line)
        if ok is None:
            ok = view.line_in_cluster(line)
            cache[line] = ok
        return ok

    seen = {x: 0}
    queue = deque([x])
    expanded = 0
    while queue:
        p = queue.popleft()
        depth = seen[p]
        if expanded >= budget:
            return ChemicalDistance(depth, search.TRUNCATED, expanded)
        expanded += 1
        for axis in range(d):
            if not line_ok(line_through(p, axis)):
                continue
            c = p[axis]
            for nc in (c - 1, c + 1):
                q = p[:axis] + (nc,) + p[axis + 1 :]
                if q in seen:
                    continue
                if q == y:
                    return ChemicalDistance(depth + 1, search.EXACT, expanded)
                seen[q] = depth + 1
                queue.append(q)
    return ChemicalDistance(math.inf, search.EXACT, expanded)


def t_tilde(
    view: ClusterView,
    x: Point,
    y: Point,
    budget: int = search.DEFAULT_BUDGET,
    scan_cap: int = DEFAULT_SCAN_CAP,
) -> TildeResult:
    """Passage time between the cluster projections of x and y.

    The search only relaxes edges whose line weight is strictly below M, so
    the value is intrinsic to the cluster.
    """
    px = project(view, x, scan_cap)
    py = project(view, y, scan_cap)
    qr = search.shortest_time(
        view.env, px.projected, py.projected, budget=budget, threshold=view.threshold_arg()
    )
    return TildeResult(qr, px, py)


def t_star(
    env: Environment,
    x: Point,
    y: Point,
    budget: int = search.DEFAULT_BUDGET,
    scan_cap: int = DEFAULT_SCAN_CAP,
) -> TildeResult:
    """Regularized passage time on the cluster of finite lines (M = +inf)."""
    if env.dist.p_infinity() >= 1.0:
        raise ClusterError("all lines are infinite")
    return t_tilde(ClusterView(env, math.inf), x, y, budget, scan_cap)


def cluster_mask_2d(view: ClusterView, bounds: Tuple[int, int, int, int]) -> np.ndarray:
    """Membership mask over the window [x0,x1] x [y0,y1]; shape (W, H), x-major."""
    if view.env.d != 2:
        raise ClusterError("cluster_mask_2d requires d=2")
    x0, x1, y0, y1 = bounds
    vw = view.env.line_weights_1d(1, x0, x1)  # vertical line at column x
    hw = view.env.line_weights_1d(0, y0, y1)  # horizontal line at row y
    return (vw < view.M)[:, None] | (hw < view.M)[None, :]
