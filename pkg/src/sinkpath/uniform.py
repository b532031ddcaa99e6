"""Uniform-capacity specialization.

When every edge shares one capacity c, the critical vertex of a concatenated
span follows from its two halves in O(1), so the tree stores a per-node
summary instead of envelope tables: O(n) build, O(log n) range queries, and
O(log n) greedy walks via incrementally merged running summaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import INF, Point, PrefixIndex, within


@dataclass(slots=True)
class UniformSummary:
    lo: int
    hi: int
    lvtx: int      # critical vertex for a sink just right of v_hi
    lcost: float
    rvtx: int      # critical vertex for a sink just left of v_lo
    rcost: float
    weight: float
    length: float


class UNode:
    __slots__ = ("lo", "hi", "left", "right", "parent", "summary")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        self.left = None
        self.right = None
        self.parent = None
        self.summary = None

    @property
    def is_leaf(self):
        return self.left is None


def merge_summaries(left: UniformSummary, right: UniformSummary, idx: PrefixIndex,
                    c: float = None) -> UniformSummary:
    """O(1) combine of two adjacent span summaries; ties pick the smaller
    vertex index."""
    if left.hi + 1 != right.lo:
        raise ValueError("summaries must span adjacent subpaths")
    if c is None:
        c = idx.net.cap[1] if idx.net.n > 1 else INF
    tau = idx.net.tau
    cd = idx.cd
    # sink moves from just past v_{left.hi} to just past v_{right.hi}
    l_from_left = left.lcost + (cd[right.hi] - cd[left.hi]) * tau
    l_from_right = right.lcost + left.weight / c
    if l_from_left >= l_from_right:
        lvtx, lcost = left.lvtx, l_from_left
    else:
        lvtx, lcost = right.lvtx, l_from_right
    r_from_left = left.rcost + right.weight / c
    r_from_right = right.rcost + (cd[right.lo] - cd[left.lo]) * tau
    if r_from_left >= r_from_right:
        rvtx, rcost = left.rvtx, r_from_left
    else:
        rvtx, rcost = right.rvtx, r_from_right
    return UniformSummary(left.lo, right.hi, lvtx, lcost, rvtx, rcost,
                          left.weight + right.weight,
                          left.length + right.length + 0.0)


class UniformTree:
    """Summary tree for uniform-capacity instances.  Immutable after build."""

    backend = "uniform"

    def __init__(self, idx: PrefixIndex):
        net = idx.net
        if not net.is_uniform:
            raise ValueError("uniform tree requires uniform edge capacities")
        self.idx = idx
        self.n = net.n
        self.c = net.cap[1] if net.n > 1 else INF
        self.leaves = [None] * (self.n + 1)
        self.merges = 0
        self.ops = 0  # critical-candidate evaluations
        self.root = self._build(1, self.n)

    def _build(self, lo, hi):
        node = UNode(lo, hi)
        if lo == hi:
            w = self.idx.net.weights[lo]
            node.summary = UniformSummary(lo, lo, lo, w / self.c, lo, w / self.c,
                                          w, 0.0)
            self.leaves[lo] = node
            return node
        mid = (lo + hi) // 2
        node.left = self._build(lo, mid)
        node.right = self._build(mid + 1, hi)
        node.left.parent = node
        node.right.parent = node
        node.summary = self._merge(node.left.summary, node.right.summary)
        return node

    def _merge(self, a, b):
        self.merges += 1
        return merge_summaries(a, b, self.idx, self.c)

    # --- canonical decomposition (same shape as the general tree) -----------

    def canonical_nodes(self, i, j):
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

    # --- range cost queries -------------------------------------------------

    def theta_L(self, i, j, sink_at_vertex=None):
        """Same contract as the general tree's theta_L: sink just past v_j
        (through e_j), or exactly at v_j when requested or j == n."""
        idx = self.idx
        cw, cd = idx.cw, idx.cd
        tau = idx.net.tau
        c = self.c
        if sink_at_vertex is None:
            sink_at_vertex = j == self.n
        if sink_at_vertex:
            # the vertex at the sink contributes nothing; fold the rest
            best_v, best_c = j, 0.0
            hi = j - 1
            if hi < i:
                return best_v, best_c
        else:
            best_v, best_c = -1, -1.0
            hi = j
        cwi = cw[i - 1]
        cdj = cd[j]
        for node in self.canonical_nodes(i, hi):
            self.ops += 1
            s = node.summary
            cost = s.lcost + (cdj - cd[node.hi]) * tau + (cw[node.lo - 1] - cwi) / c
            if cost > best_c or (cost == best_c and s.lvtx < best_v):
                best_v, best_c = s.lvtx, cost
        return best_v, best_c

    def theta_R(self, i, j, s: Point):
        idx = self.idx
        if Point.vertex(i) < s:
            raise ValueError("sink must be on or left of v_i")
        if s.is_vertex and s.anchor == i:
            # evacuees at the sink vertex are done immediately
            best_v, best_c = i, 0.0
            lo = i + 1
            if lo > j:
                return best_v, best_c
        else:
            best_v, best_c = -1, -1.0
            lo = i
        return self._theta_r_from(lo, j, idx.pos(s), best_v, best_c)

    def theta_R_edge_limit(self, e, x, j):
        return self._theta_r_from(e + 1, j, self.idx.cd[e] + x, -1, -1.0)

    def _theta_r_from(self, lo, j, spos, best_v, best_c):
        idx = self.idx
        cw, cd = idx.cw, idx.cd
        tau = idx.net.tau
        c = self.c
        cwj = cw[j]
        for node in self.canonical_nodes(lo, j):
            self.ops += 1
            s = node.summary
            cost = s.rcost + (cwj - cw[node.hi]) / c + (cd[node.lo] - spos) * tau
            if cost > best_c or (cost == best_c and s.rvtx < best_v):
                best_v, best_c = s.rvtx, cost
        return best_v, best_c

    def l_test(self, i, j, t):
        return within(self.theta_L(i, j)[1], t)

    def r_test(self, i, j, s, t):
        return within(self.theta_R(i, j, s)[1], t)

    # --- greedy walks with running summaries --------------------------------

    def max_l_covered(self, a, t):
        """Largest b >= a with l_test(a, b, t), or None; O(log n) total by
        merging sibling summaries instead of re-querying."""
        n = self.n
        if a == n:
            return n if within(self.theta_L(n, n)[1], t) else None

        def full_last():  # boundary n needs the sink-at-vertex convention
            self.ops += 1
            return within(self.theta_L(a, n)[1], t)

        S = self.leaves[a].summary
        self.ops += 1
        if not within(S.lcost, t):
            return None
        u = self.leaves[a]
        p = u.parent
        while p is not None:
            if p.hi == u.hi:
                u = p
                p = u.parent
                continue
            if p.hi == n:
                if full_last():
                    return n
                break
            S2 = self._merge(S, p.right.summary)
            self.ops += 1
            if within(S2.lcost, t):
                S = S2
                u = p
                p = u.parent
            else:
                break
        if p is None:
            return u.hi
        best = u.hi
        v = p.right
        while not v.is_leaf:
            S2 = self._merge(S, v.left.summary)
            self.ops += 1
            if within(S2.lcost, t):
                S = S2
                best = v.left.hi
                v = v.right
            else:
                v = v.left
        if v.hi == n:
            if full_last():
                best = n
        else:
            S2 = self._merge(S, v.summary)
            self.ops += 1
            if within(S2.lcost, t):
                best = v.hi
        return best

    def max_r_covered(self, c0, s, t):
        """Largest d >= c0 with r_test(c0, d, s, t), or None.  Requires s
        strictly left of v_c0 (callers shift c0 when the sink sits on it)."""
        idx = self.idx
        tau = idx.net.tau
        shift = (idx.cd[c0] - idx.pos(s)) * tau

        def ok(S):
            self.ops += 1
            return within(S.rcost + shift, t)

        S = self.leaves[c0].summary
        if not ok(S):
            return None
        u = self.leaves[c0]
        p = u.parent
        while p is not None:
            if p.hi == u.hi:
                u = p
                p = u.parent
                continue
            S2 = self._merge(S, p.right.summary)
            if ok(S2):
                S = S2
                u = p
                p = u.parent
            else:
                break
        if p is None:
            return u.hi
        best = u.hi
        v = p.right
        while not v.is_leaf:
            S2 = self._merge(S, v.left.summary)
            if ok(S2):
                S = S2
                best = v.left.hi
                v = v.right
            else:
                v = v.left
        S2 = self._merge(S, v.summary)
        if ok(S2):
            best = v.hi
        return best


def build_uniform_tree(idx: PrefixIndex) -> UniformTree:
    return UniformTree(idx)
