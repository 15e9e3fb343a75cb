"""Passage times, geodesics and ball growth on the infinite lattice.

The generic engine is a lazy best-first search: vertices are discovered on
demand and line weights are sampled (deterministically) the first time a line
is touched, so no grid is ever pre-allocated.  Ties in the priority queue are
broken by lexicographic point order, which makes every run bit-reproducible.

For d=2 environments with a positive support infimum a, point queries and
ball growth are routed through the numba window kernel (fastgrid); the window
is grown until the certificate time <= a * radius proves that the windowed
search settles exactly the vertices the infinite search would settle, so the
two paths agree bit for bit.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import fastgrid
from .environment import Environment
from .lattice import Point, l1, line_through, LineId, box_points

DEFAULT_BUDGET = 1_000_000

EXACT = "exact"
TRUNCATED = "truncated"


class SearchError(ValueError):
    pass


class NoGeodesicError(SearchError):
    pass


@dataclass
class QueryResult:
    time: float
    status: str
    geodesic: Optional[List[Point]] = None
    expanded: int = 0


@dataclass
class BallGrid:
    t: float
    points: set
    bbox: Tuple[Point, Point]
    status: str
    expanded: int = 0


@dataclass
class GreedyBound:
    bound: float
    first_cheap_row: int
    path: List[Point]


@dataclass
class _LazyResult:
    dist: Dict[Point, float]
    pred: Dict[Point, Point]
    expanded: int
    frontier_min: float
    status: int  # fastgrid status codes


def lazy_search(
    env: Environment,
    source: Point,
    targets: Iterable[Point] = (),
    tmax: float = math.inf,
    budget: int = DEFAULT_BUDGET,
    threshold: Optional[float] = None,
) -> _LazyResult:
    """Dijkstra on the infinite lattice with lazily sampled line weights."""
    if budget < 1:
        raise SearchError(f"budget must be >= 1, got {budget}")
    d = env.d
    targets = set(targets)
    remaining = len(targets)
    line_cache: Dict[LineId, float] = {}
    tau = env.tau
    inf = math.inf

    dist: Dict[Point, float] = {}
    pred: Dict[Point, Point] = {}
    heap: List[Tuple[float, Point]] = [(0.0, source)]
    tentative: Dict[Point, float] = {source: 0.0}
    expanded = 0
    frontier_min = inf
    status = fastgrid.STATUS_EXHAUSTED

    while heap:
        key, p = heapq.heappop(heap)
        if p in dist:
            continue
        if key > tmax:
            frontier_min = key
            status = fastgrid.STATUS_DONE
            break
        if expanded >= budget:
            frontier_min = key
            status = fastgrid.STATUS_BUDGET
            break
        dist[p] = key
        expanded += 1
        if p in targets:
            remaining -= 1
            if remaining == 0:
                status = fastgrid.STATUS_DONE
                frontier_min = heap[0][0] if heap else inf
                break
        for axis in range(d):
            line = line_through(p, axis)
            w = line_cache.get(line)
            if w is None:
                w = tau(line)
                if threshold is not None and w >= threshold:
                    w = inf
                line_cache[line] = w
            if w == inf:
                continue
            nd = key + w
            c = p[axis]
            for nc in (c - 1, c + 1):
                q = p[:axis] + (nc,) + p[axis + 1 :]
                if q in dist:
                    continue
                if nd < tentative.get(q, inf):
                    tentative[q] = nd
                    pred[q] = p
                    heapq.heappush(heap, (nd, q))

    return _LazyResult(dist, pred, expanded, frontier_min, status)


def _path_from_pred(pred: Dict[Point, Point], source: Point, target: Point) -> List[Point]:
    out = [target]
    p = target
    while p != source:
        p = pred[p]
        out.append(p)
    out.reverse()
    return out


def _check_points(env: Environment, *pts: Point) -> None:
    for p in pts:
        if len(p) != env.d:
            raise SearchError(f"point {p} does not match dimension {env.d}")


def shortest_time(
    env: Environment,
    x: Point,
    y: Point,
    budget: int = DEFAULT_BUDGET,
    need_path: bool = False,
    threshold: Optional[float] = None,
) -> QueryResult:
    """Passage time between lattice points x and y.

    Exact when y is settled within the budget; otherwise truncated, with the
    smallest tentative frontier distance as a certified lower bound.
    Lines with weight >= threshold (when given) are never relaxed.
    """
    x = tuple(int(c) for c in x)
    y = tuple(int(c) for c in y)
    _check_points(env, x, y)
    if budget < 1:
        raise SearchError(f"budget must be >= 1, got {budget}")
    if x == y:
        return QueryResult(0.0, EXACT, [x] if need_path else None, 0)

    if env.d == 2 and env.a > 0:
        fast = fastgrid.point_query_2d(env, x, y, budget, threshold=threshold, need_path=need_path)
        if fast is not None:
            t, expanded, path = fast
            return QueryResult(t, EXACT, path, expanded)

    res = lazy_search(env, x, targets=[y], budget=budget, threshold=threshold)
    if y in res.dist:
        path = _path_from_pred(res.pred, x, y) if need_path else None
        return QueryResult(res.dist[y], EXACT, path, res.expanded)
    if res.status == fastgrid.STATUS_BUDGET:
        return QueryResult(res.frontier_min, TRUNCATED, None, res.expanded)
    # frontier exhausted: the whole component of x was explored
    return QueryResult(math.inf, EXACT, None, res.expanded)


def shortest_times_from(
    env: Environment,
    x: Point,
    targets: Sequence[Point],
    budget: int = DEFAULT_BUDGET,
    threshold: Optional[float] = None,
) -> Dict[Point, float]:
    """Single-source exact times to several targets (same semantics per target)."""
    x = tuple(int(c) for c in x)
    targets = [tuple(int(c) for c in t) for t in targets]
    _check_points(env, x, *targets)

    if env.d == 2 and env.a > 0:
        a = env.a
        R = max(2 * max(l1(x, t) for t in targets), 32)
        while (2 * R + 1) ** 2 <= fastgrid._MAX_WINDOW_CELLS:
            bounds = (x[0] - R, x[0] + R, x[1] - R, x[1] + R)
            res = fastgrid.grid_search(env, x, targets, bounds, budget=budget, threshold=threshold)
            if res.status == fastgrid.STATUS_BUDGET:
                break
            idx = [res.index(t) for t in targets]
            if all(res.settled[i] for i in idx):
                tmaxv = max(float(res.dist[i]) for i in idx)
                if tmaxv <= a * R:
                    return {t: float(res.dist[i]) for t, i in zip(targets, idx)}
                R = int(tmaxv / a) + 2
                continue
            if res.status == fastgrid.STATUS_EXHAUSTED and not res.boundary_settled():
                out = {}
                for t, i in zip(targets, idx):
                    out[t] = float(res.dist[i]) if res.settled[i] else math.inf
                return out
            R *= 2

    res = lazy_search(env, x, targets=targets, budget=budget, threshold=threshold)
    if res.status == fastgrid.STATUS_BUDGET:
        raise SearchError("budget exhausted before all targets were settled")
    return {t: res.dist.get(t, math.inf) for t in targets}


def geodesic(env: Environment, x: Point, y: Point, budget: int = DEFAULT_BUDGET) -> QueryResult:
    """Shortest-time query with the witness path attached."""
    qr = shortest_time(env, x, y, budget=budget, need_path=True)
    if qr.status != EXACT:
        raise NoGeodesicError("search was budget-truncated; no geodesic available")
    if qr.time == math.inf:
        raise NoGeodesicError(f"{y} is unreachable from {x}")
    return qr


def grow_ball(env: Environment, t: float, budget: int = DEFAULT_BUDGET) -> BallGrid:
    """All lattice points with passage time from the origin at most t."""
    if t < 0:
        raise SearchError(f"t must be >= 0, got {t}")
    origin = (0,) * env.d

    if env.d == 2 and env.a > 0:
        res = fastgrid.ball_2d(env, t, budget)
        inside = np.flatnonzero((res.settled == 1) & (res.dist <= t))
        xs = inside // res.H + res.x0
        ys = inside % res.H + res.y0
        points = set(zip(xs.tolist(), ys.tolist()))
        status = TRUNCATED if res.status == fastgrid.STATUS_BUDGET else EXACT
        return BallGrid(t, points, _bbox(points), status, res.expanded)

    res = lazy_search(env, origin, tmax=t, budget=budget)
    points = set(res.dist.keys())
    status = TRUNCATED if res.status == fastgrid.STATUS_BUDGET else EXACT
    return BallGrid(t, points, _bbox(points), status, res.expanded)


def _bbox(points: set) -> Tuple[Point, Point]:
    if not points:
        return ((), ())
    d = len(next(iter(points)))
    lo = tuple(min(p[i] for p in points) for i in range(d))
    hi = tuple(max(p[i] for p in points) for i in range(d))
    return (lo, hi)


MAX_ORACLE_VOLUME = 10_000


def window_oracle(env: Environment, lo: Point, hi: Point, sources: Sequence[Point] = None):
    """All-pairs shortest paths restricted to the box [lo, hi].

    Independent cross-check for the lazy engine: the boxed graph is handed to
    scipy.sparse.csgraph (dense Floyd-Warshall for small boxes, its Dijkstra
    otherwise).  Restriction to the box is exact only under a containment
    argument (window radius > achievable time / a); otherwise the result is
    an upper bound on the free-lattice passage time.

    Returns (points, matrix) with points in lexicographic order.  When
    ``sources`` is given, only those rows are solved: matrix row i then holds
    the distances from sources[i] to every window point.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as cs_dijkstra, floyd_warshall

    lo = tuple(int(c) for c in lo)
    hi = tuple(int(c) for c in hi)
    _check_points(env, lo, hi)
    volume = 1
    for a, b in zip(lo, hi):
        volume *= b - a + 1
    if volume > MAX_ORACLE_VOLUME:
        raise SearchError(f"window volume {volume} exceeds {MAX_ORACLE_VOLUME}")

    points = list(box_points(lo, hi))
    index = {p: i for i, p in enumerate(points)}
    rows, cols, data = [], [], []
    cache: Dict[LineId, float] = {}
    for p in points:
        for axis in range(env.d):
            q = p[:axis] + (p[axis] + 1,) + p[axis + 1 :]
            j = index.get(q)
            if j is None:
                continue
            line = line_through(p, axis)
            w = cache.get(line)
            if w is None:
                w = env.tau(line)
                cache[line] = w
            if w == math.inf:
                continue
            i = index[p]
            rows += [i, j]
            cols += [j, i]
            data += [w, w]
    graph = csr_matrix((data, (rows, cols)), shape=(len(points), len(points)))
    if sources is not None:
        idx = []
        for s in sources:
            i = index.get(tuple(int(c) for c in s))
            if i is None:
                raise SearchError(f"source {s} lies outside the window")
            idx.append(i)
        mat = cs_dijkstra(graph, directed=False, indices=idx)
    elif len(points) <= 1200:
        mat = floyd_warshall(graph, directed=False)
    else:
        mat = cs_dijkstra(graph, directed=False)
    return points, mat


def greedy_line_bound(
    env: Environment, n: int, eps: float, scan_cap: int = 1_000_000
) -> GreedyBound:
    """Explicit upper bound on T(0, n*e1) for d=2.

    Scans rows k = 1, 2, ... for the first horizontal line with weight at most
    a + eps, then bounds the cost of the path up / across / down that uses it.
    """
    if env.d != 2:
        raise SearchError("greedy_line_bound is defined for d=2")
    if eps <= 0:
        raise SearchError("eps must be positive")
    a = env.a
    if a == math.inf:
        raise SearchError("support infimum is not finite")
    N = None
    for k in range(1, scan_cap + 1):
        if env.tau(LineId(0, (k,))) <= a + eps:
            N = k
            break
    if N is None:
        raise SearchError(f"no row with weight <= a+eps found within scan cap {scan_cap}")
    tau_v0 = env.tau(LineId(1, (0,)))
    tau_vn = env.tau(LineId(1, (n,)))
    bound = N * tau_v0 + n * (a + eps) + N * tau_vn
    path = (
        [(0, k) for k in range(0, N + 1)]
        + [(i, N) for i in range(1, n + 1)]
        + [(n, k) for k in range(N - 1, -1, -1)]
    )
    return GreedyBound(bound, N, path)
