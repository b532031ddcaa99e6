"""Brute-force references, independent of the tree/envelope machinery.

Everything here goes through the raw prefix arrays only, so failures in the
fast structures and failures here stay uncorrelated.  Cost is O(n^2)-O(n^3);
intended for desk-scale cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import INF, PathNetwork, Point, within


@dataclass(frozen=True)
class OracleReport:
    value: float
    witness: object
    method: str


def _arrays(net: PathNetwork):
    n = net.n
    cw = np.cumsum([0.0] + net.weights[1:])          # cw[i] = w_1 + ... + w_i
    cd = np.zeros(n + 1)                             # cd[i] = d(v_1, v_i)
    for i in range(2, n + 1):
        cd[i] = cd[i - 1] + net.length[i - 1]
    cap = np.array([np.inf] + net.cap[1:])           # cap[e] at index e
    return cw, cd, cap


def _suffix_min(cap, lo, hi):
    """min(cap[lo..hi]) ... min(cap[hi..hi]), then one trailing inf."""
    if hi < lo:
        return np.array([np.inf])
    seg = cap[lo:hi + 1]
    rev = np.minimum.accumulate(seg[::-1])[::-1]
    return np.concatenate([rev, [np.inf]])


def _prefix_min(cap, lo, hi):
    """inf, then min(cap[lo..lo]) ... min(cap[lo..hi])."""
    if hi < lo:
        return np.array([np.inf])
    seg = cap[lo:hi + 1]
    return np.concatenate([[np.inf], np.minimum.accumulate(seg)])


def theta_l_direct(net: PathNetwork, i: int, j: int) -> float:
    """Direct maximization of the left-funnel cost with the sink just past
    v_j (through e_j when j < n, ending at v_n otherwise)."""
    cw, cd, cap = _arrays(net)
    tau = net.tau
    e_hi = j if j < net.n else j - 1
    # c(v_h, boundary) for h = i..j
    caps = _suffix_min(cap, i, e_hi)[: j - i + 1] if e_hi >= i else np.full(j - i + 1, np.inf)
    if e_hi >= i and len(caps) < j - i + 1:
        caps = np.concatenate([caps, np.full(j - i + 1 - len(caps), np.inf)])
    h = np.arange(i, j + 1)
    vals = (cd[j] - cd[h]) * tau + (cw[h] - cw[i - 1]) / caps
    return float(vals.max())


def theta_r_direct(net: PathNetwork, i: int, j: int, s: Point) -> float:
    """Direct maximization of the right-funnel cost toward sink s <= v_i."""
    cw, cd, cap = _arrays(net)
    tau = net.tau
    spos = cd[s.anchor] + s.offset
    e_lo = s.anchor
    h = np.arange(i, j + 1)
    caps = np.empty(len(h))
    for t, hh in enumerate(h):
        caps[t] = cap[e_lo:hh].min() if hh > e_lo else np.inf
    vals = (cd[h] - spos) * tau + (cw[j] - cw[h - 1]) / caps
    return float(vals.max())


def theta_l_table(net: PathNetwork) -> np.ndarray:
    """All-pairs matrix T[i, j] of the left-funnel maxima (vertex sink
    convention at j == n); entries with i > j are zero."""
    n = net.n
    cw, cd, cap = _arrays(net)
    tau = net.tau
    T = np.zeros((n + 1, n + 1))
    for j in range(1, n + 1):
        e_hi = j if j < n else j - 1
        caps = _suffix_min(cap, 1, e_hi)[:j]  # c(v_h, boundary), h = 1..j
        if len(caps) < j:
            caps = np.concatenate([caps, np.full(j - len(caps), np.inf)])
        h = np.arange(1, j + 1)
        base = (cd[j] - cd[h]) * tau + cw[h] / caps          # i = 1 numerators
        g = 1.0 / caps
        # vals[i, h] = base[h] - cw[i-1] * g[h], maximized over h >= i
        vals = base[None, :] - np.outer(cw[:j], g)
        mask = np.tril(np.ones((j, j), dtype=bool), k=-1)    # h < i is invalid
        vals[mask] = -np.inf
        T[1:j + 1, j] = vals.max(axis=1)
    return T


def _vertex_sink_tables(net: PathNetwork):
    """LV[i, p]: left-funnel max for v_i..v_p with the sink exactly at v_p.
    RV[p, j]: right-funnel max for v_p..v_j with the sink exactly at v_p."""
    n = net.n
    cw, cd, cap = _arrays(net)
    tau = net.tau
    LV = np.zeros((n + 1, n + 1))
    RV = np.zeros((n + 1, n + 1))
    for p in range(1, n + 1):
        caps = _suffix_min(cap, 1, p - 1)[:p]
        if len(caps) < p:
            caps = np.concatenate([caps, np.full(p - len(caps), np.inf)])
        h = np.arange(1, p + 1)
        base = (cd[p] - cd[h]) * tau + cw[h] / caps
        g = 1.0 / caps
        vals = base[None, :] - np.outer(cw[:p], g)
        vals[np.tril(np.ones((p, p), dtype=bool), k=-1)] = -np.inf
        LV[1:p + 1, p] = vals.max(axis=1)

        m = n - p + 1
        capsr = _prefix_min(cap, p, n - 1)[:m]
        if len(capsr) < m:
            capsr = np.concatenate([capsr, np.full(m - len(capsr), np.inf)])
        h = np.arange(p, n + 1)
        base = (cd[h] - cd[p]) * tau - cw[h - 1] / capsr
        g = 1.0 / capsr
        # vals[idx_j, idx_h] = base[h] + cw[j] * g[h] for h <= j
        vals = base[None, :] + np.outer(cw[p:n + 1], g)
        vals[np.triu(np.ones((m, m), dtype=bool), k=1)] = -np.inf
        RV[p, p:n + 1] = vals.max(axis=1)
    return LV, RV


def _edge_limit_tables(net: PathNetwork):
    """L0[i, e]: left-funnel max for v_i..v_e with the sink entering edge e
    (edge e counted in every capacity).  R0[e, j]: right-funnel max for
    v_{e+1}..v_j measured from v_e's position, edge e counted."""
    n = net.n
    cw, cd, cap = _arrays(net)
    tau = net.tau
    L0 = np.full((n + 1, n + 1), -np.inf)
    R0 = np.full((n + 1, n + 1), -np.inf)
    for e in range(1, n):
        caps = _suffix_min(cap, 1, e)[:e]  # c(v_h .. through e), h = 1..e
        h = np.arange(1, e + 1)
        base = (cd[e] - cd[h]) * tau + cw[h] / caps
        g = 1.0 / caps
        vals = base[None, :] - np.outer(cw[:e], g)
        vals[np.tril(np.ones((e, e), dtype=bool), k=-1)] = -np.inf
        L0[1:e + 1, e] = vals.max(axis=1)

        m = n - e
        capsr = _prefix_min(cap, e, n - 1)[1:m + 1]  # c(e..h-1), h = e+1..n
        h = np.arange(e + 1, n + 1)
        base = (cd[h] - cd[e]) * tau - cw[h - 1] / capsr
        g = 1.0 / capsr
        vals = base[None, :] + np.outer(cw[e + 1:n + 1], g)
        vals[np.triu(np.ones((m, m), dtype=bool), k=1)] = -np.inf
        R0[e, e + 1:n + 1] = vals.max(axis=1)
    return L0, R0


class OnePassTables:
    """Shared per-instance tables for repeated 1-sink / DP queries."""

    def __init__(self, net: PathNetwork):
        self.net = net
        self.LV, self.RV = _vertex_sink_tables(net)
        self.L0, self.R0 = _edge_limit_tables(net)

    def one_sink(self, i: int, j: int):
        net = self.net
        tau = net.tau
        if i == j:
            return Point.vertex(i), 0.0
        best_time = INF
        best_sink = None
        for p in range(i, j + 1):
            t = max(self.LV[i, p], self.RV[p, j])
            if t < best_time:
                best_time = t
                best_sink = Point.vertex(p)
        for e in range(i, j):
            l0 = self.L0[i, e]
            r0 = self.R0[e, j]
            length = net.length[e]
            x = (r0 - l0) / (2.0 * tau)
            x = min(max(x, 0.0), length)
            t = max(l0 + x * tau, r0 - x * tau)
            if t < best_time:
                best_time = t
                best_sink = Point.on_edge(net, e, x)
        return best_sink, best_time


def oracle_1sink(net: PathNetwork, i: int, j: int):
    """Exact optimal single sink for v_i..v_j by per-edge linear crossing."""
    return OnePassTables(net).one_sink(i, j)


def one_sink_time_table(net: PathNetwork) -> np.ndarray:
    """OPT[i, j] = optimal 1-sink time of v_i..v_j for all i <= j."""
    n = net.n
    tabs = OnePassTables(net)
    out = np.zeros((n + 1, n + 1))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[i, j] = tabs.one_sink(i, j)[1]
    return out


def oracle_ksink_dp(net: PathNetwork, k: int):
    """Exact minimum over all <= k contiguous partitions: (t*, partition)."""
    n = net.n
    if k >= n:
        return 0.0, [(i, i) for i in range(1, n + 1)]
    opt1 = one_sink_time_table(net)
    best = np.full((k + 1, n + 1), np.inf)
    arg = np.zeros((k + 1, n + 1), dtype=int)
    best[0, 0] = 0.0
    for kk in range(1, k + 1):
        best[kk, 0] = 0.0
        for j in range(1, n + 1):
            for i in range(1, j + 1):
                cand = max(best[kk - 1, i - 1], opt1[i, j])
                if cand < best[kk, j]:
                    best[kk, j] = cand
                    arg[kk, j] = i
    parts = []
    j = n
    kk = k
    while j > 0:
        i = arg[kk, j]
        parts.append((int(i), int(j)))
        j = i - 1
        kk -= 1
    parts.reverse()
    return float(best[k, n]), parts


def oracle_feasible(net: PathNetwork, t: float, k: int) -> bool:
    """Greedy feasibility with direct scans (no tree structures)."""
    if t < 0 or k < 1:
        return False
    n = net.n
    tau = net.tau
    a = 1
    for _ in range(k):
        # extend the left-covered prefix as far as the direct test allows
        b = None
        for j in range(a, n + 1):
            if within(theta_l_direct(net, a, j), t):
                b = j
            else:
                break
        if b is None:
            b = a
            sink = Point.vertex(a)
        elif b == n:
            return True
        else:
            cost = theta_l_direct(net, a, b)
            # rightmost point of [v_b, v_{b+1}] under the same tolerance as
            # the coverage tests; the far vertex is picked explicitly so
            # zero-length edges cannot collapse back to v_b
            if within(cost + net.length[b] * tau, t):
                sink = Point.vertex(b + 1)
            else:
                x = min(max((t - cost) / tau, 0.0), net.length[b])
                sink = Point.on_edge(net, b, x)
        c0 = b + 1
        if sink.is_vertex and sink.anchor == c0:
            c0 += 1
        if c0 > n:
            return True
        d = c0 - 1
        for j in range(c0, n + 1):
            if within(theta_r_direct(net, c0, j, sink), t):
                d = j
            else:
                break
        if d == n:
            return True
        if d < a:  # no progress is impossible, but guard anyway
            return False
        a = d + 1
    return False
