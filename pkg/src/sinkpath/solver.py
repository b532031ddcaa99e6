"""Greedy feasibility, single-sink location, and k-sink optimization.

The optimizer searches the implicit sorted matrix of all single-sink optima
with a quadrant-pruning scheme, driving the greedy feasibility test built on
either query backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import fastpath
from .cctree import CCTree
from .model import INF, PathNetwork, Point, PrefixIndex, build_index, within
from .uniform import UniformTree


class SinkEngine:
    """Backend dispatch: one query tree (general or uniform) plus its index.

    Both backends expose the same query surface, so everything above this
    level is backend-agnostic.
    """

    def __init__(self, idx: PrefixIndex, backend: str = "auto"):
        if backend == "auto":
            backend = "uniform" if idx.net.is_uniform else "general"
        if backend == "general":
            if fastpath.available:
                self.tree = fastpath.FlatCCTree(idx)
            else:
                self.tree = CCTree(idx)
        elif backend == "uniform":
            self.tree = UniformTree(idx)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.idx = idx
        self.backend = backend
        self.n = idx.net.n

    @property
    def ops(self):
        return self.tree.ops

    def reset_ops(self):
        self.tree.ops = 0

    def theta_L(self, i, j, sink_at_vertex=None):
        return self.tree.theta_L(i, j, sink_at_vertex)

    def theta_R(self, i, j, s):
        return self.tree.theta_R(i, j, s)

    def theta_R_edge_limit(self, e, x, j):
        return self.tree.theta_R_edge_limit(e, x, j)

    def l_test(self, i, j, t):
        return self.tree.l_test(i, j, t)

    def r_test(self, i, j, s, t):
        return self.tree.r_test(i, j, s, t)

    def max_l_covered(self, a, t):
        return self.tree.max_l_covered(a, t)

    def max_r_covered(self, c0, s, t):
        return self.tree.max_r_covered(c0, s, t)


def make_engine(net: PathNetwork, backend: str = "auto") -> SinkEngine:
    return SinkEngine(build_index(net), backend)


@dataclass(slots=True)
class Segment:
    """One greedy piece: vertices [a, d] served by ``sink``, with [a, b] the
    part left of (or at) the sink."""
    a: int
    b: int
    sink: Point
    d: int


@dataclass(slots=True)
class SolvePlan:
    k: int
    time: float
    segments: list

    @property
    def sinks(self):
        return [seg.sink for seg in self.segments]

    @property
    def partition(self):
        return [(seg.a, seg.d) for seg in self.segments]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "time": float(f"{self.time:.12g}"),
            "sinks": [s.to_json() for s in self.sinks],
            "partition": [[a, d] for a, d in self.partition],
        }


def isolate_subpath(engine: SinkEngine, t: float, a: int) -> Segment:
    """Maximal subpath from v_a coverable by one sink within time t.

    The sink goes to the rightmost point of [v_b, v_{b+1}] that keeps the
    left-side cost within t (b being the last vertex the left test accepts),
    then the right side is extended as far as the right test allows.
    """
    idx = engine.idx
    n = engine.n
    tau = idx.net.tau
    b = engine.max_l_covered(a, t)
    if b is None:
        b = a
        sink = Point.vertex(a)
    elif b == n:
        sink = Point.vertex(n)
    else:
        cost = engine.theta_L(a, b)[1]
        length = idx.net.length[b]
        if within(cost + length * tau, t):
            # the far end of the edge is still affordable; pick v_{b+1}
            # explicitly (the same tolerance the coverage tests use, and
            # robust on zero-length edges where both endpoints overlap)
            sink = Point.vertex(b + 1)
        else:
            x = min(max((t - cost) / tau, 0.0), length)
            sink = Point.on_edge(idx.net, b, x)
    c0 = b + 1
    if sink.is_vertex and sink.anchor == c0:
        # evacuees at the sink vertex are covered for free
        c0 += 1
    if c0 > n:
        return Segment(a, b, sink, n if b >= n else max(b, sink.anchor))
    d = engine.max_r_covered(c0, sink, t)
    if d is None:
        d = c0 - 1
    if d == b and not sink.is_vertex:
        # nothing to the right is coverable even from the rightmost sink,
        # so v_b (farther from the right side) fails the same tests; snap
        # back so the sink lies inside its own segment
        sink = Point.vertex(b)
    return Segment(a, b, sink, d)


def find_1sink(engine: SinkEngine, i: int, j: int):
    """Optimal sink for v_i..v_j: (sink point, evacuation time).

    Binary descent over the tree: at each candidate split edge the left cost
    rises and the right cost falls linearly in the sink position, so either
    they cross there or the optimum lies on the higher side.
    """
    if not 1 <= i <= j <= engine.n:
        raise IndexError(f"bad vertex range [{i},{j}]")
    if i == j:
        return Point.vertex(i), 0.0
    idx = engine.idx
    net = idx.net
    tau = net.tau
    raw = getattr(engine.tree, "one_sink_raw", None)
    if raw is not None:
        anchor, offset, time = raw(i, j)
        if offset < 0.0:
            return Point.vertex(anchor), time
        return Point.on_edge(net, anchor, offset), time
    u = engine.tree.root
    while not u.is_leaf:
        m = u.left.hi
        if m < i:
            u = u.right
            continue
        if m >= j:
            u = u.left
            continue
        l0 = engine.theta_L(i, m, sink_at_vertex=False)[1]
        r0 = engine.theta_R_edge_limit(m, 0.0, j)[1]
        length = net.length[m]
        x = (r0 - l0) / (2.0 * tau)
        if x < 0.0:
            u = u.left
        elif x > length:
            u = u.right
        else:
            return Point.on_edge(net, m, x), l0 + x * tau
    p = u.lo
    lcost = engine.theta_L(i, p, sink_at_vertex=True)[1] if p > i else 0.0
    rcost = engine.theta_R(p, j, Point.vertex(p))[1] if p < j else 0.0
    return Point.vertex(p), max(lcost, rcost)


def feasible(engine: SinkEngine, t: float, k: int):
    """Greedy (t, k)-feasibility: (verdict, plan or None)."""
    if t < 0 or k < 1:
        return False, None
    n = engine.n
    segments = []
    a = 1
    for _ in range(k):
        seg = isolate_subpath(engine, t, a)
        segments.append(seg)
        if seg.d >= n:
            return True, SolvePlan(k=k, time=t, segments=segments)
        a = seg.d + 1
    return False, None


class OptMatrixView:
    """Implicit n x n sorted matrix of single-sink optima.

    ``entry(i, j)`` is the optimal 1-sink time of v_{n-i+1}..v_j when that
    subpath is nonempty, else 0; rows and columns are nondecreasing.  Entries
    are computed lazily and memoized.
    """

    def __init__(self, engine: SinkEngine):
        self.engine = engine
        self.n = engine.n
        self._memo = {}
        self._high = set()  # entries proved >= some past (nonincreasing) hi_t
        self._low = set()   # entries proved <= some past (nondecreasing) lo_t

    def entry(self, i: int, j: int) -> float:
        n = self.n
        if i > n or j > n:
            return INF  # padding beyond the real matrix
        l = n - i + 1
        if l > j:
            return 0.0
        key = (l, j)
        val = self._memo.get(key)
        if val is None:
            val = find_1sink(self.engine, l, j)[1]
            self._memo[key] = val
        return val

    def entry_band(self, i: int, j: int, lo_t: float, hi_t: float):
        """(cls, value): cls +1 means the entry is >= hi_t, -1 means it is
        <= lo_t (value is then just a bound); cls 0 carries the exact value.

        The band may only narrow over the search, so cached verdicts stay
        valid."""
        n = self.n
        if i > n or j > n:
            return 1, INF
        l = n - i + 1
        if l > j:
            return 0, 0.0
        key = (l, j)
        val = self._memo.get(key)
        if val is not None:
            return 0, val
        if key in self._high:
            return 1, hi_t
        if key in self._low:
            return -1, lo_t
        band = getattr(self.engine.tree, "one_sink_band", None)
        if band is None:
            return 0, self.entry(i, j)
        cls, v = band(l, j, lo_t, hi_t)
        if cls == 0:
            self._memo[key] = v
        elif cls > 0:
            self._high.add(key)
        else:
            self._low.add(key)
        return cls, v


def opt_entry(view: OptMatrixView, i: int, j: int) -> float:
    return view.entry(i, j)


def sorted_matrix_search(engine: SinkEngine, k: int) -> float:
    """Smallest matrix entry t with feasible(t, k): quadrant pruning with
    one feasibility probe per weighted corner median each round."""
    n = engine.n
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    view = OptMatrixView(engine)
    feas_memo = {}

    def is_feasible(t):
        v = feas_memo.get(t)
        if v is None:
            v = feasible(engine, t, k)[0]
            feas_memo[t] = v
        return v

    hi = view.entry(n, n)  # whole-path single sink; always feasible
    if not is_feasible(hi):  # pragma: no cover - safety net
        raise AssertionError("whole-path optimum must be feasible")
    best_feas = hi
    worst_infeas = -INF

    size = 1
    while size < n:
        size *= 2
    squares = [(1, 1, size)]

    def prune(sqs):
        keep = []
        for (i0, j0, s) in sqs:
            cls, lo_corner = view.entry_band(i0, j0, worst_infeas, best_feas)
            if cls > 0 or (cls == 0 and lo_corner >= best_feas):
                continue
            if cls < 0 or lo_corner <= worst_infeas:
                # low corner below the band: the square survives only if the
                # high corner rises above it (entries ascend along diagonals)
                cls, hi_corner = view.entry_band(i0 + s - 1, j0 + s - 1,
                                                 worst_infeas, best_feas)
                if cls < 0 or (cls == 0 and hi_corner <= worst_infeas):
                    continue
            keep.append((i0, j0, s))
        return keep

    def probe(corners):
        nonlocal best_feas, worst_infeas
        finite = []
        for (ci, cj, w) in corners:
            cls, v = view.entry_band(ci, cj, worst_infeas, best_feas)
            if cls == 0 and math.isfinite(v) and worst_infeas < v < best_feas:
                finite.append((v, w))
        if not finite:
            return
        v = _weighted_median(finite)
        if is_feasible(v):
            best_feas = min(best_feas, v)
        else:
            worst_infeas = max(worst_infeas, v)

    squares = prune(squares)
    while squares and squares[0][2] > 1:
        nxt = []
        for (i0, j0, s) in squares:
            h = s // 2
            nxt.extend(
                ((i0, j0, h), (i0 + h, j0, h), (i0, j0 + h, h), (i0 + h, j0 + h, h))
            )
        squares = prune(nxt)
        if not squares:
            break
        probe([(i0, j0, s * s) for (i0, j0, s) in squares])
        squares = prune(squares)
        if not squares:
            break
        probe([(i0, j0, s * s) for (i0, j0, s) in squares])
        squares = prune(squares)

    # surviving singletons: binary search their sorted in-band values
    cvals = set()
    for (i0, j0, _s) in squares:
        cls, v = view.entry_band(i0, j0, worst_infeas, best_feas)
        if cls == 0 and math.isfinite(v):
            cvals.add(v)
    cand = sorted(cvals)
    lo, hi_ix = 0, len(cand)
    while lo < hi_ix:
        mid = (lo + hi_ix) // 2
        if is_feasible(cand[mid]):
            best_feas = min(best_feas, cand[mid])
            hi_ix = mid
        else:
            lo = mid + 1
    return best_feas


def bisect_search(engine: SinkEngine, k: int) -> float:
    """Cross-check optimizer: materialize every matrix entry and binary
    search the sorted distinct values."""
    n = engine.n
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    values = {0.0}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            values.add(find_1sink(engine, i, j)[1])
    cand = sorted(values)
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(engine, cand[mid], k)[0]:
            hi = mid
        else:
            lo = mid + 1
    return cand[lo]


def solve_ksink(net: PathNetwork, k: int, backend: str = "auto",
                optimizer: str = "sorted-matrix") -> SolvePlan:
    """Optimal k-sink plan for the network (k is clamped to n)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    engine = make_engine(net, backend)
    kk = min(k, net.n)
    if optimizer == "sorted-matrix":
        tstar = sorted_matrix_search(engine, kk)
    elif optimizer == "bisect":
        tstar = bisect_search(engine, kk)
    else:
        raise ValueError(f"unknown optimizer {optimizer!r}")
    ok, plan = feasible(engine, tstar, kk)
    assert ok, "optimal time must be feasible"
    plan.time = tstar
    plan.k = kk
    return plan


def _weighted_median(values_weights):
    pairs = sorted(values_weights)
    total = sum(w for _v, w in pairs)
    acc = 0.0
    for v, w in pairs:
        acc += w
        if acc * 2 >= total:
            return v
    return pairs[-1][0]
