"""Numba-accelerated best-first search on d=2 windows.

The d=2 environment restricted to a rectangle is described by two weight
vectors: vw[x] is the weight of the vertical line at column x (edges
(x,y)-(x,y+1)) and hw[y] the weight of the horizontal line at row y (edges
(x,y)-(x+1,y)).  The kernel runs Dijkstra with the same deterministic
tie-break as the generic engine: heap entries ordered by (distance,
lexicographic point), where the node index x-major encoding makes index order
equal to lexicographic point order.

Windowed results are exact on the full lattice whenever the window contains
every point within L1 radius time/a of the source (a > 0); the wrappers below
grow the window until that certificate holds.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .lattice import Point, l1

STATUS_DONE = 0
STATUS_BUDGET = 1
STATUS_EXHAUSTED = 2

_MAX_WINDOW_CELLS = 48_000_000


@njit(cache=True, nogil=True)
def _dijkstra_kernel(vw, hw, W, H, src, targets, tmax, budget):
    N = W * H
    dist = np.full(N, np.inf)
    pred = np.full(N, -1, np.int64)
    settled = np.zeros(N, np.uint8)
    is_target = np.zeros(N, np.uint8)
    for t in targets:
        is_target[t] = 1
    remaining = len(targets)

    cap = 4096
    hk = np.empty(cap, np.float64)
    hv = np.empty(cap, np.int64)
    size = 0

    # push source
    hk[0] = 0.0
    hv[0] = src
    size = 1
    dist[src] = 0.0

    expanded = 0
    frontier_min = np.inf
    status = STATUS_EXHAUSTED

    while size > 0:
        # pop min (key, idx)
        key = hk[0]
        node = hv[0]
        size -= 1
        hk[0] = hk[size]
        hv[0] = hv[size]
        i = 0
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            right = left + 1
            c = left
            if right < size and (
                hk[right] < hk[left] or (hk[right] == hk[left] and hv[right] < hv[left])
            ):
                c = right
            if hk[c] < hk[i] or (hk[c] == hk[i] and hv[c] < hv[i]):
                tk = hk[i]
                tv = hv[i]
                hk[i] = hk[c]
                hv[i] = hv[c]
                hk[c] = tk
                hv[c] = tv
                i = c
            else:
                break

        if settled[node]:
            continue
        if key > tmax:
            frontier_min = key
            status = STATUS_DONE
            break
        if expanded >= budget:
            frontier_min = key
            status = STATUS_BUDGET
            break

        settled[node] = 1
        expanded += 1
        if is_target[node]:
            remaining -= 1
            if remaining == 0:
                status = STATUS_DONE
                # frontier min = smallest pending key, for completeness
                frontier_min = hk[0] if size > 0 else np.inf
                break

        x = node // H
        y = node - x * H
        # neighbor order: axis ascending, minus before plus
        for k in range(4):
            if k == 0:
                if x == 0:
                    continue
                nb = node - H
                w = hw[y]
            elif k == 1:
                if x == W - 1:
                    continue
                nb = node + H
                w = hw[y]
            elif k == 2:
                if y == 0:
                    continue
                nb = node - 1
                w = vw[x]
            else:
                if y == H - 1:
                    continue
                nb = node + 1
                w = vw[x]
            if w == np.inf or settled[nb]:
                continue
            nd = key + w
            if nd < dist[nb]:
                dist[nb] = nd
                pred[nb] = node
                # push (nd, nb)
                if size >= cap:
                    ncap = cap * 2
                    nhk = np.empty(ncap, np.float64)
                    nhv = np.empty(ncap, np.int64)
                    nhk[:size] = hk[:size]
                    nhv[:size] = hv[:size]
                    hk = nhk
                    hv = nhv
                    cap = ncap
                j = size
                hk[j] = nd
                hv[j] = nb
                size += 1
                while j > 0:
                    par = (j - 1) // 2
                    if hk[j] < hk[par] or (hk[j] == hk[par] and hv[j] < hv[par]):
                        tk = hk[j]
                        tv = hv[j]
                        hk[j] = hk[par]
                        hv[j] = hv[par]
                        hk[par] = tk
                        hv[par] = tv
                        j = par
                    else:
                        break

    return dist, pred, settled, expanded, frontier_min, status


class GridResult:
    """Search result on a window [x0,x1] x [y0,y1]."""

    __slots__ = ("x0", "y0", "W", "H", "dist", "pred", "settled", "expanded", "frontier_min", "status")

    def __init__(self, x0, y0, W, H, dist, pred, settled, expanded, frontier_min, status):
        self.x0 = x0
        self.y0 = y0
        self.W = W
        self.H = H
        self.dist = dist
        self.pred = pred
        self.settled = settled
        self.expanded = int(expanded)
        self.frontier_min = float(frontier_min)
        self.status = int(status)

    def index(self, p: Point) -> int:
        return (p[0] - self.x0) * self.H + (p[1] - self.y0)

    def point(self, idx: int) -> Point:
        x, y = divmod(int(idx), self.H)
        return (x + self.x0, y + self.y0)

    def distance(self, p: Point) -> float:
        i = self.index(p)
        if 0 <= i < self.W * self.H and self.settled[i]:
            return float(self.dist[i])
        return math.inf

    def path_to(self, p: Point):
        i = self.index(p)
        if not self.settled[i]:
            return None
        out = [self.point(i)]
        while self.pred[i] >= 0:
            i = int(self.pred[i])
            out.append(self.point(i))
        out.reverse()
        return out

    def boundary_settled(self) -> bool:
        s = self.settled.reshape(self.W, self.H)
        return bool(s[0, :].any() or s[-1, :].any() or s[:, 0].any() or s[:, -1].any())


def grid_search(
    env,
    source: Point,
    targets: Sequence[Point],
    bounds: Tuple[int, int, int, int],
    tmax: float = math.inf,
    budget: int = 10_000_000,
    threshold: Optional[float] = None,
) -> GridResult:
    """Dijkstra on the window; threshold excludes lines with weight >= threshold."""
    x0, x1, y0, y1 = bounds
    W = x1 - x0 + 1
    H = y1 - y0 + 1
    if W <= 0 or H <= 0:
        raise ValueError(f"empty window {bounds}")
    vw = env.line_weights_1d(1, x0, x1)
    hw = env.line_weights_1d(0, y0, y1)
    if threshold is not None:
        vw = np.where(vw < threshold, vw, np.inf)
        hw = np.where(hw < threshold, hw, np.inf)
    src = (source[0] - x0) * H + (source[1] - y0)
    tg = np.array([(p[0] - x0) * H + (p[1] - y0) for p in targets], dtype=np.int64)
    dist, pred, settled, expanded, fmin, status = _dijkstra_kernel(
        vw, hw, W, H, src, tg, float(tmax), int(budget)
    )
    return GridResult(x0, y0, W, H, dist, pred, settled, expanded, fmin, status)


def point_query_2d(
    env,
    x: Point,
    y: Point,
    budget: int,
    threshold: Optional[float] = None,
    need_path: bool = False,
):
    """Exact point-to-point query for a > 0 via window doubling.

    Returns (time, expanded, path) on success, or None when the query must be
    handled by the generic engine (budget exhausted, or window cap reached).
    The certificate time <= a*R guarantees every vertex settled before the
    target lies inside the window, so the windowed run replays the infinite
    lattice search state for state.
    """
    a = env.a
    if a <= 0:
        return None
    R = max(2 * l1(x, y), 32)
    while True:
        if (2 * R + 1) ** 2 > _MAX_WINDOW_CELLS:
            return None
        bounds = (x[0] - R, x[0] + R, x[1] - R, x[1] + R)
        res = grid_search(env, x, [y], bounds, budget=budget, threshold=threshold)
        if res.status == STATUS_BUDGET:
            return None
        ti = res.index(y)
        if not res.settled[ti]:
            if res.status == STATUS_EXHAUSTED and not res.boundary_settled():
                # whole component explored inside the window: truly unreachable
                return (math.inf, res.expanded, None)
            R *= 2
            continue
        t = float(res.dist[ti])
        if t <= a * R:
            path = res.path_to(y) if need_path else None
            return (t, res.expanded, path)
        R = int(t / a) + 2


def ball_2d(env, t: float, budget: int):
    """Exact ball growth for a > 0: window = bounding box of the t/a diamond."""
    a = env.a
    if a <= 0:
        raise ValueError("ball_2d requires a positive support infimum")
    R = int(t / a) + 1
    bounds = (-R, R, -R, R)
    res = grid_search(env, (0, 0), [], bounds, tmax=t, budget=budget)
    return res
