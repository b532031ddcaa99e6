"""Array-flattened twin of the general-capacity query tree.

Same tables, same tie rules as the object tree, but over an implicit
perfect-binary-tree layout compiled with numba so large instances build and
query at native speed.  Importing this module is safe without numba; callers
check ``available`` before use.

The query kernels are memory-latency bound at large n, so the layout keeps
the per-query working set small and the loads independent:

- node ids come from heap arithmetic (leaf v at P + v - 1), so canonical
  decomposition and the sink descent touch no pointers at all, and the row
  loads of one query can overlap in the pipeline;
- a node's range is derived from its id, and its boundary constants are read
  from the shared prefix arrays, so each internal node carries exactly one
  64-byte row: a one-slot cache for the capacity half and the weight half of
  its query.

Query results are bitwise identical to the object tree whenever the two
decompose ranges identically (any power-of-two n); otherwise they agree to
rounding, since both reduce to the same per-vertex candidate values.
"""

from __future__ import annotations

import numpy as np

from .model import INF, Point, PrefixIndex, within

try:
    from numba import njit

    available = True
except ImportError:  # pragma: no cover - exercised only without numba
    available = False

    def njit(*a, **k):  # type: ignore
        def wrap(fn):
            return fn

        return wrap if not (len(a) == 1 and callable(a[0])) else a[0]


# bigL/bigR[u] (float64, 16 cols = two adjacent cache lines; one row is
# everything one node evaluation touches):
#   0 capacity-range key (query edge bound), 1 range-min capacity C,
#   2 prefix count, 3 tag2, 4 val2 (capacity side);
#   5 W key, 6 tag1, 7 val1 (weight side);
#   8 lo, 9 hi, 10 table offset, 11/12 hull sizes,
#   13 boundary weight prefix, 14 boundary position, 15 leaf weight
# (leaves use the cache cols 0-1 and the constants only)
#
# D layout: 0 bigL, 1 bigR, 2 suf, 3 pre,
#           4-7 lw, 8-11 lc, 12-15 rw, 16-19 rc,
#           20 cw, 21 cd, 22 wts, 23 caps, 24 bmin, 25 blogt, 26 lengths

_BLK = 16  # edges per range-min block

# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _env_add(sl, ic, tg, br, base, k, a, b, t):
    """Push line (a, b, t) onto the ascending-slope hull rooted at base."""
    if k > 0 and sl[base + k - 1] == a:
        # duplicate slope: keep larger intercept, then smaller tag
        if b < ic[base + k - 1] or (b == ic[base + k - 1] and t > tg[base + k - 1]):
            return k
        k -= 1
    while k > 0:
        x = (ic[base + k - 1] - b) / (a - sl[base + k - 1])
        if k > 1 and x <= br[base + k - 2]:
            k -= 1
            continue
        if k == 1 and x <= 0.0:
            # the old line never wins on x >= 0
            k -= 1
            continue
        br[base + k - 1] = x
        break
    sl[base + k] = a
    ic[base + k] = b
    tg[base + k] = t
    return k + 1


@njit(cache=True)
def _build_tables(P, n, heapLo, heapHi, off, cw, cd, cap, tau,
                  suf, pre,
                  lw_s, lw_i, lw_t, lw_b,
                  lc_s, lc_i, lc_t, lc_b,
                  rw_s, rw_i, rw_t, rw_b,
                  rc_s, rc_i, rc_t, rc_b,
                  bigL, bigR):
    for u in range(1, P):
        h = heapHi[u]
        if h > n:
            continue
        l = heapLo[u]
        base = off[u]
        m = h - l + 1

        run = INF
        suf[base + m - 1] = INF
        for v in range(h - 1, l - 1, -1):
            c = cap[v]
            if c < run:
                run = c
            suf[base + v - l] = run
        run = INF
        pre[base] = INF
        for v in range(l + 1, h + 1):
            c = cap[v - 1]
            if c < run:
                run = c
            pre[base + v - l] = run

        cw0 = cw[l - 1]
        cwh = cw[h]
        cdhi = cd[h]
        cdlo = cd[l]

        # left weight table: ascending slope 1/c(v_h, v_hi) = h descending
        k = 0
        for v in range(h, l - 1, -1):
            inv = 1.0 / suf[base + v - l]
            k = _env_add(lw_s, lw_i, lw_t, lw_b, base, k,
                         inv, (cdhi - cd[v]) * tau + (cw[v] - cw0) * inv, v)
        bigL[u, 11] = k

        # left capacity table: slope W[lo, h] ascending with h
        k = 0
        for v in range(l, h + 1):
            k = _env_add(lc_s, lc_i, lc_t, lc_b, base, k,
                         cw[v] - cw0, (cdhi - cd[v]) * tau, v)
        bigL[u, 12] = k

        # right weight table: slope 1/c(v_lo, v_h) ascending with h
        k = 0
        for v in range(l, h + 1):
            inv = 1.0 / pre[base + v - l]
            k = _env_add(rw_s, rw_i, rw_t, rw_b, base, k,
                         inv, (cd[v] - cdlo) * tau + (cwh - cw[v - 1]) * inv, v)
        bigR[u, 11] = k

        # right capacity table: slope W[h, hi] ascending = h descending
        k = 0
        for v in range(h, l - 1, -1):
            k = _env_add(rc_s, rc_i, rc_t, rc_b, base, k,
                         cwh - cw[v - 1], (cd[v] - cdlo) * tau, v)
        bigR[u, 12] = k


@njit(cache=True)
def _env_q(sl, ic, tg, br, base, ln, x):
    """(tag, value) of a maximizing hull line at x; break ties to smaller tag."""
    a = 0
    b = ln - 1
    while a < b:
        mid = (a + b) // 2
        if br[base + mid] <= x:
            a = mid + 1
        else:
            b = mid
    val = sl[base + a] * x + ic[base + a]
    if a > 0 and br[base + a - 1] == x and tg[base + a - 1] < tg[base + a]:
        return tg[base + a - 1], val
    return tg[base + a], val


@njit(cache=True)
def _rmcap(caps, bmin, blogt, e1, e2):
    """Exact min capacity over edges e1..e2: partial-block scans plus a
    sparse-table query over whole blocks in between."""
    if e1 > e2:
        return INF
    b1 = (e1 - 1) >> 4
    b2 = (e2 - 1) >> 4
    run = INF
    if b1 == b2:
        for e in range(e1, e2 + 1):
            c = caps[e]
            if c < run:
                run = c
        return run
    for e in range(e1, (b1 + 1) * _BLK + 1):
        c = caps[e]
        if c < run:
            run = c
    for e in range(b2 * _BLK + 1, e2 + 1):
        c = caps[e]
        if c < run:
            run = c
    nb = b2 - b1 - 1
    if nb > 0:
        k = blogt[nb]
        a = bmin[k, b1 + 1]
        b = bmin[k, b2 - (1 << k)]
        if a < run:
            run = a
        if b < run:
            run = b
    return run


@njit(cache=True)
def _cost_L(D, P, u, e_hi, cwi, cdj, tau):
    """(tag, cost) of canonical node u toward a sink at position cdj."""
    bigL = D[0]
    if u >= P:
        l = u - P + 1
        if bigL[u, 0] == e_hi:
            C = bigL[u, 1]
        else:
            C = _rmcap(D[23], D[24], D[25], l, e_hi)
            bigL[u, 0] = e_hi
            bigL[u, 1] = C
        return l, (bigL[u, 13] - cwi + bigL[u, 15]) / C + (cdj - bigL[u, 14]) * tau
    lo = int(bigL[u, 8])
    hi = int(bigL[u, 9])
    base = int(bigL[u, 10])
    W = bigL[u, 13] - cwi
    dist = (cdj - bigL[u, 14]) * tau
    # both cache halves repeat heavily across queries (a fixed evacuee
    # boundary keeps W per node, nearby sinks keep the capacity bound);
    # hits skip the range-min and the binary searches
    if bigL[u, 0] == e_hi:
        C = bigL[u, 1]
        a = int(bigL[u, 2])
        tag2 = int(bigL[u, 3])
        val2 = bigL[u, 4]
    else:
        C = _rmcap(D[23], D[24], D[25], hi, e_hi)
        bigL[u, 0] = e_hi
        if C == bigL[u, 1]:
            # same range-min under a different bound: searches still valid
            a = int(bigL[u, 2])
            tag2 = int(bigL[u, 3])
            val2 = bigL[u, 4]
        else:
            # largest prefix with c(v_h, v_hi) <= C (suf is nondecreasing)
            a = 0
            b = hi - lo + 1
            while a < b:
                mid = (a + b) // 2
                if D[2][base + mid] <= C:
                    a = mid + 1
                else:
                    b = mid
            tag2, val2 = _env_q(D[8], D[9], D[10], D[11], base,
                                int(bigL[u, 12]), 1.0 / C)
            bigL[u, 1] = C
            bigL[u, 2] = a
            bigL[u, 3] = tag2
            bigL[u, 4] = val2
    p1_max = lo + a - 1
    if bigL[u, 5] == W:
        tag1 = int(bigL[u, 6])
        val1 = bigL[u, 7]
    else:
        tag1, val1 = _env_q(D[4], D[5], D[6], D[7], base, int(bigL[u, 11]), W)
        bigL[u, 5] = W
        bigL[u, 6] = tag1
        bigL[u, 7] = val1
    val2 += W / C
    if tag1 > p1_max:
        return tag2, val2 + dist
    if tag2 <= p1_max:
        return tag1, val1 + dist
    if val1 > val2 or (val1 == val2 and tag1 < tag2):
        return tag1, val1 + dist
    return tag2, val2 + dist


@njit(cache=True)
def _cost_R(D, P, u, e_lo, cwj, spos, tau):
    bigR = D[1]
    if u >= P:
        l = u - P + 1
        if bigR[u, 0] == e_lo:
            C = bigR[u, 1]
        else:
            C = _rmcap(D[23], D[24], D[25], e_lo, l - 1)
            bigR[u, 0] = e_lo
            bigR[u, 1] = C
        return l, (bigR[u, 15] + cwj - bigR[u, 13]) / C + (bigR[u, 14] - spos) * tau
    lo = int(bigR[u, 8])
    base = int(bigR[u, 10])
    W = cwj - bigR[u, 13]
    dist = (bigR[u, 14] - spos) * tau
    if bigR[u, 0] == e_lo:
        C = bigR[u, 1]
        a = int(bigR[u, 2])
        tag2 = int(bigR[u, 3])
        val2 = bigR[u, 4]
    else:
        C = _rmcap(D[23], D[24], D[25], e_lo, lo - 1)
        bigR[u, 0] = e_lo
        if C == bigR[u, 1]:
            # same range-min under a different bound: searches still valid
            a = int(bigR[u, 2])
            tag2 = int(bigR[u, 3])
            val2 = bigR[u, 4]
        else:
            # first h with c(v_lo, v_h) <= C (pre is nonincreasing)
            a = 0
            b = int(bigR[u, 9]) - lo + 1
            while a < b:
                mid = (a + b) // 2
                if D[3][base + mid] <= C:
                    b = mid
                else:
                    a = mid + 1
            tag2, val2 = _env_q(D[16], D[17], D[18], D[19], base,
                                int(bigR[u, 12]), 1.0 / C)
            bigR[u, 1] = C
            bigR[u, 2] = a
            bigR[u, 3] = tag2
            bigR[u, 4] = val2
    first = lo + a
    if bigR[u, 5] == W:
        tag1 = int(bigR[u, 6])
        val1 = bigR[u, 7]
    else:
        tag1, val1 = _env_q(D[12], D[13], D[14], D[15], base, int(bigR[u, 11]), W)
        bigR[u, 5] = W
        bigR[u, 6] = tag1
        bigR[u, 7] = val1
    val2 += W / C
    if tag1 < first:
        return tag2, val2 + dist
    if tag2 >= first:
        return tag1, val1 + dist
    if val1 > val2 or (val1 == val2 and tag1 < tag2):
        return tag1, val1 + dist
    return tag2, val2 + dist


@njit(cache=True)
def _theta_L(D, P, i, j, at_vertex, tau):
    cw = D[20]
    cd = D[21]
    e_hi = j - 1 if at_vertex else j
    cwi = cw[i - 1]
    cdj = cd[j]
    best_v = -1
    best_c = -1.0
    ops = 0
    a = i + P - 1
    b = j + P - 1
    while a <= b:
        if a & 1:
            ops += 1
            tag, cost = _cost_L(D, P, a, e_hi, cwi, cdj, tau)
            if cost > best_c or (cost == best_c and tag < best_v):
                best_v, best_c = tag, cost
            a += 1
        if not b & 1:
            ops += 1
            tag, cost = _cost_L(D, P, b, e_hi, cwi, cdj, tau)
            if cost > best_c or (cost == best_c and tag < best_v):
                best_v, best_c = tag, cost
            b -= 1
        a >>= 1
        b >>= 1
    return best_v, best_c, ops


@njit(cache=True)
def _theta_R_from(D, P, lo_v, j, e_lo, spos, tau):
    cwj = D[20][j]
    best_v = -1
    best_c = -1.0
    ops = 0
    a = lo_v + P - 1
    b = j + P - 1
    while a <= b:
        if a & 1:
            ops += 1
            tag, cost = _cost_R(D, P, a, e_lo, cwj, spos, tau)
            if cost > best_c or (cost == best_c and tag < best_v):
                best_v, best_c = tag, cost
            a += 1
        if not b & 1:
            ops += 1
            tag, cost = _cost_R(D, P, b, e_lo, cwj, spos, tau)
            if cost > best_c or (cost == best_c and tag < best_v):
                best_v, best_c = tag, cost
            b -= 1
        a >>= 1
        b >>= 1
    return best_v, best_c, ops


@njit(cache=True)
def _one_sink(D, P, i, j, tau):
    cd = D[21]
    lengths = D[26]
    u = 1
    lo = 1
    width = P
    while u < P:
        half = width >> 1
        m = lo + half - 1
        if m < i:
            u = 2 * u + 1
            lo += half
            width = half
            continue
        if m >= j:
            u = 2 * u
            width = half
            continue
        l0 = _theta_L(D, P, i, m, False, tau)[1]
        r0 = _theta_R_from(D, P, m + 1, j, m, cd[m], tau)[1]
        length = lengths[m]
        x = (r0 - l0) / (2.0 * tau)
        if x < 0.0:
            u = 2 * u
            width = half
        elif x > length:
            u = 2 * u + 1
            lo += half
            width = half
        else:
            return m, x, l0 + x * tau
    p = lo
    lcost = _theta_L(D, P, i, p, True, tau)[1] if p > i else 0.0
    rcost = _theta_R_from(D, P, p, j, p, cd[p], tau)[1] if p < j else 0.0
    return p, -1.0, max(lcost, rcost)


@njit(cache=True)
def _one_sink_band(D, P, i, j, tau, lo_t, hi_t, hint):
    """Like _one_sink but may stop early: returns (cls, value, ops, edge)
    where cls is +1 if the optimum is provably >= hi_t, -1 if provably
    <= lo_t, else 0 with the exact value.  Probing edge m and finding the
    crossing left of it bounds the optimum in [r0, max(l0, r0)]; finding it
    right bounds it in [l0 + len*tau, max(l0 + len*tau, r0)] (the
    neighbouring vertex sink).  The probe order is free: the crossing test
    is monotone over edges, so with a hint from a nearby query we gallop
    outward from it instead of bisecting the whole range."""
    cd = D[21]
    lengths = D[26]
    lb = 0.0
    ub = INF
    ops = 0
    va = i
    vb = j  # sink lies in vertex range [va, vb]; candidate edges va..vb-1
    gallop = va <= hint < vb
    m = hint if gallop else (va + vb) // 2
    step = 1
    last_dir = 0
    while va < vb:
        tvl, l0, o1 = _theta_L(D, P, i, m, False, tau)
        tvr, r0, o2 = _theta_R_from(D, P, m + 1, j, m, cd[m], tau)
        ops += o1 + o2
        length = lengths[m]
        x = (r0 - l0) / (2.0 * tau)
        if x < 0.0:
            if r0 > lb:
                lb = r0
            c = l0 if l0 > r0 else r0
            if c < ub:
                ub = c
            vb = m
            d = -1
        elif x > length:
            c = l0 + length * tau
            if c > lb:
                lb = c
            if r0 > c:
                c = r0
            if c < ub:
                ub = c
            va = m + 1
            d = 1
        else:
            return 0, l0 + x * tau, ops, m
        if lb >= hi_t:
            return 1, lb, ops, m
        if ub <= lo_t:
            return -1, ub, ops, m
        if va >= vb:
            break
        if gallop and (last_dir == 0 or d == last_dir):
            last_dir = d
            m += d * step
            step <<= 1
            if m < va:
                m = va
            elif m > vb - 1:
                m = vb - 1
        else:
            # direction reversed: the bracket is tight, finish by bisection
            gallop = False
            m = (va + vb) // 2
    p = va
    lcost = _theta_L(D, P, i, p, True, tau)[1] if p > i else 0.0
    rcost = _theta_R_from(D, P, p, j, p, cd[p], tau)[1] if p < j else 0.0
    return 0, max(lcost, rcost), ops, p


# ---------------------------------------------------------------------------
# wrapper
# ---------------------------------------------------------------------------

class FlatCCTree:
    """Drop-in replacement for the object tree on the general backend."""

    backend = "general"

    def __init__(self, idx: PrefixIndex):
        self.idx = idx
        net = idx.net
        n = self.n = net.n
        self.ops = 0
        self._hint = -1

        P = 1
        while P < n:
            P *= 2
        self.P = P

        heapLo = np.empty(2 * P, np.int64)
        heapHi = np.empty(2 * P, np.int64)
        heapLo[0] = heapHi[0] = 0
        heapLo[P:] = np.arange(1, P + 1)
        heapHi[P:] = heapLo[P:]
        for u in range(P - 1, 0, -1):
            heapLo[u] = heapLo[2 * u]
            heapHi[u] = heapHi[2 * u + 1]

        # per-node tables exist for internal nodes fully inside the path;
        # nodes that cover padding leaves are never part of a decomposition
        real = np.zeros(2 * P, bool)
        real[1:P] = heapHi[1:P] <= n
        spans = np.where(real, heapHi - heapLo + 1, 0)
        off = np.zeros(2 * P, np.int64)
        off[1:] = np.cumsum(spans)[:-1]
        total = int(spans.sum())
        self.line_insertions = 4 * total

        cw = np.asarray(idx.cw, np.float64)
        cd = np.asarray(idx.cd, np.float64)
        wts = np.asarray(net.weights, np.float64)
        lengths = np.asarray(net.length, np.float64)
        cap = np.asarray(net.cap, np.float64)

        # block sparse table for range-min over edge capacities
        m = n - 1
        nb = max((m + _BLK - 1) // _BLK, 1)
        levels = 1
        while (1 << levels) <= nb:
            levels += 1
        bmin = np.full((levels, nb), INF)
        if m >= 1:
            padded = np.full(nb * _BLK, INF)
            padded[:m] = cap[1:m + 1]
            bmin[0] = padded.reshape(nb, _BLK).min(axis=1)
            for k in range(1, levels):
                half = 1 << (k - 1)
                cnt = nb - (1 << k) + 1
                bmin[k, :cnt] = np.minimum(bmin[k - 1, :cnt],
                                           bmin[k - 1, half:half + cnt])
        blogt = np.zeros(nb + 1, np.int64)
        for v in range(2, nb + 1):
            blogt[v] = blogt[v >> 1] + 1

        def f(): return np.empty(max(total, 1), np.float64)
        def g(): return np.empty(max(total, 1), np.int64)
        suf, pre = f(), f()
        lw = (f(), f(), g(), f())
        lc = (f(), f(), g(), f())
        rw = (f(), f(), g(), f())
        rc = (f(), f(), g(), f())

        # one-slot caches; range key -5 and W key -1 are never legal queries
        bigL = np.zeros((2 * P, 16))
        bigR = np.zeros((2 * P, 16))
        loc = np.minimum(heapLo, n)
        hic = np.minimum(heapHi, n)
        for big in (bigL, bigR):
            big[:, 0] = -5.0
            big[:, 5] = -1.0
            big[:, 8] = heapLo
            big[:, 9] = heapHi
            big[:, 10] = off
            big[:, 15] = wts[loc]
        bigL[:, 13] = cw[loc - 1]
        bigL[:, 14] = cd[hic]
        bigR[:, 13] = cw[hic]
        bigR[:, 14] = cd[loc]

        _build_tables(P, n, heapLo, heapHi, off, cw, cd, cap, net.tau,
                      suf, pre, *lw, *lc, *rw, *rc, bigL, bigR)

        self.D = (bigL, bigR, suf, pre,
                  lw[0], lw[1], lw[2], lw[3],
                  lc[0], lc[1], lc[2], lc[3],
                  rw[0], rw[1], rw[2], rw[3],
                  rc[0], rc[1], rc[2], rc[3],
                  cw, cd, wts, cap, bmin, blogt, lengths)
        self.tau = net.tau

    # --- queries (same contract as the object tree) --------------------------

    def theta_L(self, i, j, sink_at_vertex=None):
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"bad vertex range [{i},{j}]")
        if sink_at_vertex is None:
            sink_at_vertex = j == self.n
        v, c, ops = _theta_L(self.D, self.P, i, j, sink_at_vertex, self.tau)
        self.ops += ops
        return int(v), c

    def theta_R(self, i, j, s: Point):
        if Point.vertex(i) < s:
            raise ValueError("sink must be on or left of v_i")
        v, c, ops = _theta_R_from(self.D, self.P, i, j, s.anchor,
                                  self.idx.pos(s), self.tau)
        self.ops += ops
        return int(v), c

    def theta_R_edge_limit(self, e, x, j):
        v, c, ops = _theta_R_from(self.D, self.P, e + 1, j, e,
                                  self.idx.cd[e] + x, self.tau)
        self.ops += ops
        return int(v), c

    def one_sink_raw(self, i, j):
        anchor, offset, t = _one_sink(self.D, self.P, i, j, self.tau)
        return int(anchor), offset, t

    def one_sink_band(self, i, j, lo_t, hi_t):
        cls, v, ops, edge = _one_sink_band(self.D, self.P, i, j, self.tau,
                                           lo_t, hi_t, self._hint)
        self.ops += ops
        self._hint = edge
        return int(cls), v

    def l_test(self, i, j, t):
        return within(self.theta_L(i, j)[1], t)

    def r_test(self, i, j, s, t):
        return within(self.theta_R(i, j, s)[1], t)

    # --- maximal coverage scans ----------------------------------------------

    def _scan_max(self, a, test):
        """Largest h in [a, n] passing the monotone test, None if even a
        fails: doubling bracket then binary search."""
        if not test(a):
            return None
        h = a
        step = 1
        while h + step <= self.n and test(h + step):
            h += step
            step <<= 1
        lo, hi = h, min(h + step, self.n)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if test(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def max_l_covered(self, a, t):
        return self._scan_max(a, lambda h: self.l_test(a, h, t))

    def max_r_covered(self, c0, s, t):
        return self._scan_max(c0, lambda h: self.r_test(c0, h, s, t))
