"""Critical-cluster tree for general edge capacities.

A balanced binary tree over the path's vertices.  Each internal node stores
two sorted capacity lists and four line envelopes ("weight" and "capacity"
tables, one pair per direction) built from the raw prefix arrays, giving
O(log n) critical-candidate queries per node and O(log^2 n) range cost
queries overall.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right

from .envelope import _envelope_from_sorted
from .model import INF, Point, PrefixIndex, within


class CCNode:
    __slots__ = (
        "lo", "hi", "left", "right", "parent",
        "sufcap", "precap", "lw", "lc", "rw", "rc",
    )

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        self.left = None
        self.right = None
        self.parent = None
        self.sufcap = None   # c(v_h, v_hi) for h=lo..hi, nondecreasing (last inf)
        self.precap = None   # c(v_lo, v_h) for h=lo..hi, nonincreasing (first inf)
        self.lw = None       # left weight table
        self.lc = None       # left capacity table
        self.rw = None       # right weight table
        self.rc = None       # right capacity table

    @property
    def is_leaf(self):
        return self.left is None


class CriticalCandidate:
    __slots__ = ("vertex", "cost")

    def __init__(self, vertex, cost):
        self.vertex = vertex
        self.cost = cost


class CCTree:
    """Built once from a :class:`PrefixIndex`; queries are pure."""

    backend = "general"

    def __init__(self, idx: PrefixIndex):
        self.idx = idx
        self.n = idx.net.n
        self.leaves = [None] * (self.n + 1)
        self.line_insertions = 0
        self.ops = 0  # critical-candidate evaluations
        self.root = self._build(1, self.n)
        self.height = self._height(self.root)

    # --- construction -------------------------------------------------------

    def _build(self, lo, hi):
        node = CCNode(lo, hi)
        if lo == hi:
            self.leaves[lo] = node
            return node
        mid = (lo + hi) // 2
        node.left = self._build(lo, mid)
        node.right = self._build(mid + 1, hi)
        node.left.parent = node
        node.right.parent = node
        self._build_tables(node)
        return node

    def _height(self, node):
        if node.is_leaf:
            return 0
        return 1 + max(self._height(node.left), self._height(node.right))

    def _build_tables(self, node):
        idx = self.idx
        net = idx.net
        cw, cd, cap, tau = idx.cw, idx.cd, net.cap, net.tau
        lo, hi = node.lo, node.hi
        m = hi - lo + 1

        # suffix minima of capacities toward v_hi and prefix minima from v_lo
        suf = [INF] * m
        run = INF
        for h in range(hi - 1, lo - 1, -1):
            c = cap[h]
            if c < run:
                run = c
            suf[h - lo] = run
        pre = [INF] * m
        run = INF
        for h in range(lo + 1, hi + 1):
            c = cap[h - 1]
            if c < run:
                run = c
            pre[h - lo] = run
        node.sufcap = array("d", suf)
        node.precap = array("d", pre)

        cw0 = cw[lo - 1]
        cwh = cw[hi]
        cdhi = cd[hi]
        cdlo = cd[lo]

        # left weight table: one line per vertex, ascending slope = h descending
        raw = []
        for h in range(hi, lo - 1, -1):
            c = suf[h - lo]
            inv = 1.0 / c
            raw.append((inv, (cdhi - cd[h]) * tau + (cw[h] - cw0) * inv, h))
        node.lw = _envelope_from_sorted(raw, m)

        # left capacity table: slope W[lo,h] ascending with h
        raw = []
        for h in range(lo, hi + 1):
            raw.append((cw[h] - cw0, (cdhi - cd[h]) * tau, h))
        node.lc = _envelope_from_sorted(raw, m)

        # right weight table: slope 1/c(v_lo,v_h) ascending with h
        raw = []
        for h in range(lo, hi + 1):
            c = pre[h - lo]
            inv = 1.0 / c
            raw.append((inv, (cd[h] - cdlo) * tau + (cwh - cw[h - 1]) * inv, h))
        node.rw = _envelope_from_sorted(raw, m)

        # right capacity table: slope W[h,hi] ascending = h descending
        raw = []
        for h in range(hi, lo - 1, -1):
            raw.append((cwh - cw[h - 1], (cd[h] - cdlo) * tau, h))
        node.rc = _envelope_from_sorted(raw, m)

        self.line_insertions += 4 * m

    # --- canonical decomposition -------------------------------------------

    def canonical_nodes(self, i, j):
        """Maximal disjoint nodes whose spans partition [v_i, v_j], in order."""
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"bad vertex range [{i},{j}]")
        out = []
        self._decompose(self.root, i, j, out)
        return out

    def _decompose(self, node, i, j, out):
        if i <= node.lo and node.hi <= j:
            out.append(node)
            return
        mid = node.left.hi
        if i <= mid:
            self._decompose(node.left, i, j, out)
        if j > mid:
            self._decompose(node.right, i, j, out)

    # --- per-node critical candidates --------------------------------------

    def cost_L_node(self, node, W, C) -> CriticalCandidate:
        """Vertex of the node span maximizing the left-funnel cost for outside
        weight W and downstream capacity bound C, and that cost."""
        self.ops += 1
        idx = self.idx
        lo, hi = node.lo, node.hi
        if node.is_leaf:
            return CriticalCandidate(lo, (W + idx.net.weights[lo]) / C)
        # split span at the largest h with c(v_h, v_hi) <= C
        cnt = bisect_right(node.sufcap, C)
        p1_max = lo + cnt - 1  # capped side is [lo, p1_max]
        tag1, val1 = node.lw.query(W)
        tag2, val2 = node.lc.query(1.0 / C)
        val2 += W / C
        in_p2_1 = tag1 > p1_max
        in_p1_2 = tag2 <= p1_max
        assert not (in_p2_1 and in_p1_2), "both argmaxes outside their regions"
        if in_p2_1:
            return CriticalCandidate(tag2, val2)
        if in_p1_2:
            return CriticalCandidate(tag1, val1)
        if val1 > val2 or (val1 == val2 and tag1 < tag2):
            return CriticalCandidate(tag1, val1)
        return CriticalCandidate(tag2, val2)

    def cost_R_node(self, node, W, C) -> CriticalCandidate:
        """Mirror of :meth:`cost_L_node` for rightward funnels."""
        self.ops += 1
        idx = self.idx
        lo, hi = node.lo, node.hi
        if node.is_leaf:
            return CriticalCandidate(lo, (idx.net.weights[lo] + W) / C)
        # precap is nonincreasing; find the first h with c(v_lo, v_h) <= C
        first = lo + _bisect_desc(node.precap, C)
        tag1, val1 = node.rw.query(W)
        tag2, val2 = node.rc.query(1.0 / C)
        val2 += W / C
        in_pc_1 = tag1 < first
        in_pw_2 = tag2 >= first
        assert not (in_pc_1 and in_pw_2), "both argmaxes outside their regions"
        if in_pc_1:
            return CriticalCandidate(tag2, val2)
        if in_pw_2:
            return CriticalCandidate(tag1, val1)
        if val1 > val2 or (val1 == val2 and tag1 < tag2):
            return CriticalCandidate(tag1, val1)
        return CriticalCandidate(tag2, val2)

    # --- range cost queries -------------------------------------------------

    def theta_L(self, i, j, sink_at_vertex=None):
        """(critical vertex, cost) for v_i..v_j funneling right to a sink just
        past v_j (through e_j), or exactly at v_j when ``sink_at_vertex`` or
        j == n."""
        idx = self.idx
        n = self.n
        if sink_at_vertex is None:
            sink_at_vertex = j == n
        cw, cd = idx.cw, idx.cd
        tau = idx.net.tau
        cwi = cw[i - 1]
        cdj = cd[j]
        e_hi = j - 1 if sink_at_vertex else j
        best_v, best_c = -1, -1.0
        for node in self.canonical_nodes(i, j):
            W = cw[node.lo - 1] - cwi
            C = idx.range_min_cap(node.hi, e_hi)
            cand = self.cost_L_node(node, W, C)
            cost = cand.cost + (cdj - cd[node.hi]) * tau
            if cost > best_c or (cost == best_c and cand.vertex < best_v):
                best_v, best_c = cand.vertex, cost
        return best_v, best_c

    def theta_R(self, i, j, s: Point):
        """(critical vertex, cost) for v_i..v_j funneling left to sink s."""
        idx = self.idx
        if Point.vertex(i) < s:
            raise ValueError("sink must be on or left of v_i")
        cw, cd = idx.cw, idx.cd
        tau = idx.net.tau
        cwj = cw[j]
        spos = idx.pos(s)
        e_lo = s.anchor  # first edge right of s (s vertex: e_{anchor}; interior: own edge)
        best_v, best_c = -1, -1.0
        for node in self.canonical_nodes(i, j):
            W = cwj - cw[node.hi]
            C = idx.range_min_cap(e_lo, node.lo - 1)
            cand = self.cost_R_node(node, W, C)
            cost = cand.cost + (cd[node.lo] - spos) * tau
            if cost > best_c or (cost == best_c and cand.vertex < best_v):
                best_v, best_c = cand.vertex, cost
        return best_v, best_c

    def theta_R_edge_limit(self, e, x, j):
        """Cost of v_{e+1}..v_j funneling left to a sink x into edge e, under
        the interior-point capacity rule (edge e always counts), valid for
        0 <= x <= length(e)."""
        idx = self.idx
        cw, cd = idx.cw, idx.cd
        tau = idx.net.tau
        cwj = cw[j]
        spos = cd[e] + x
        best_v, best_c = -1, -1.0
        for node in self.canonical_nodes(e + 1, j):
            W = cwj - cw[node.hi]
            C = idx.range_min_cap(e, node.lo - 1)
            cand = self.cost_R_node(node, W, C)
            cost = cand.cost + (cd[node.lo] - spos) * tau
            if cost > best_c or (cost == best_c and cand.vertex < best_v):
                best_v, best_c = cand.vertex, cost
        return best_v, best_c

    # --- tests and greedy walks --------------------------------------------

    def l_test(self, i, j, t):
        return within(self.theta_L(i, j)[1], t)

    def r_test(self, i, j, s, t):
        return within(self.theta_R(i, j, s)[1], t)

    def max_l_covered(self, a, t):
        """Largest b >= a with l_test(a, b, t), or None; up-then-down walk."""
        return _walk_max(self, self.leaves[a], lambda hi: self.l_test(a, hi, t))

    def max_r_covered(self, c0, s, t):
        """Largest d >= c0 with r_test(c0, d, s, t), or None."""
        return _walk_max(self, self.leaves[c0], lambda hi: self.r_test(c0, hi, s, t))


def _bisect_desc(arr, C):
    """First index whose value is <= C in a nonincreasing array."""
    lo, hi = 0, len(arr)
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] <= C:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _walk_max(tree, leaf, test):
    """Up-then-down tree walk finding the rightmost passing boundary.

    ``test(hi)`` must be monotone (once false, false for larger hi).  Visits
    O(log n) nodes with one test at each.
    """
    if not test(leaf.hi):
        return None
    u = leaf
    p = u.parent
    while p is not None:
        if p.hi == u.hi:  # same right boundary, verdict unchanged
            u = p
            p = u.parent
            continue
        if test(p.hi):
            u = p
            p = u.parent
        else:
            break
    if p is None:
        return u.hi
    # u is the left child of p and p's boundary fails: descend p.right
    best = u.hi
    v = p.right
    while not v.is_leaf:
        if test(v.left.hi):
            best = v.left.hi
            v = v.right
        else:
            v = v.left
    if test(v.hi):
        best = v.hi
    return best
