"""Dynamic path network model: instances, prefix indices, cost primitives.

A path network is a chain of vertices v_1..v_n.  Vertex i holds w_i evacuees;
edge e_i = (v_i, v_{i+1}) has a length and a throughput capacity.  Travel
takes ``tau`` time per unit distance.  All indices are 1-based to match the
usual convention for these instances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

INF = math.inf

# Relative/absolute slack used whenever a computed cost is compared against a
# time threshold.  Quotients are the only inexact step on integral inputs.
REL_TOL = 1e-9
ABS_TOL = 1e-12


def within(cost: float, t: float) -> bool:
    """True if ``cost`` does not exceed threshold ``t`` up to tolerance."""
    return cost <= t * (1.0 + REL_TOL) + ABS_TOL


class InstanceError(ValueError):
    """Malformed or invalid instance data."""


@dataclass(frozen=True)
class Point:
    """A location on the path.

    ``offset == 0`` means the vertex ``anchor`` itself; otherwise the point
    lies ``offset`` into edge e_anchor, strictly between its endpoints.
    Construct through :meth:`vertex` / :meth:`on_edge` so that edge endpoints
    normalize to their vertex form.
    """

    anchor: int
    offset: float = 0.0

    @staticmethod
    def vertex(i: int) -> "Point":
        return Point(i, 0.0)

    @staticmethod
    def on_edge(net: "PathNetwork", e: int, offset: float) -> "Point":
        if not 1 <= e <= net.n - 1:
            raise InstanceError(f"edge index {e} out of range")
        length = net.length[e]
        if offset < 0 or offset > length:
            raise ValueError(f"offset {offset} outside edge {e} of length {length}")
        if offset == 0.0:
            return Point(e, 0.0)
        if offset == length:
            return Point(e + 1, 0.0)
        return Point(e, offset)

    @property
    def is_vertex(self) -> bool:
        return self.offset == 0.0

    @property
    def edge(self) -> int:
        """Edge index containing this point (interior points only)."""
        if self.is_vertex:
            raise ValueError("point is a vertex, not an edge interior point")
        return self.anchor

    def key(self):
        return (self.anchor, self.offset)

    def __le__(self, other: "Point") -> bool:
        return self.key() <= other.key()

    def __lt__(self, other: "Point") -> bool:
        return self.key() < other.key()

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.anchor}
        return {"edge": self.anchor, "offset": self.offset}

    @staticmethod
    def from_json(net: "PathNetwork", obj: dict) -> "Point":
        if "vertex" in obj:
            i = obj["vertex"]
            if not isinstance(i, int) or not 1 <= i <= net.n:
                raise InstanceError(f"sink vertex {i!r} out of range")
            return Point.vertex(i)
        if "edge" in obj and "offset" in obj:
            return Point.on_edge(net, obj["edge"], float(obj["offset"]))
        raise InstanceError(f"bad point object: {obj!r}")


class PathNetwork:
    """Validated path network.  Immutable after construction.

    ``weights``, ``length`` and ``cap`` are stored 1-based (index 0 unused).
    """

    __slots__ = ("tau", "n", "weights", "length", "cap")

    def __init__(self, tau: float, weights, edges):
        if tau is None or not tau > 0:
            raise InstanceError(f"transit rate tau must be positive, got {tau}")
        weights = [float(w) for w in weights]
        if len(weights) < 1:
            raise InstanceError("at least one vertex required")
        if len(edges) != len(weights) - 1:
            raise InstanceError(
                f"edge count {len(edges)} does not match vertex count "
                f"{len(weights)} minus one"
            )
        for i, w in enumerate(weights, start=1):
            if not w >= 0:
                raise InstanceError(f"vertex {i} has negative weight {w}")
        length = [0.0]
        cap = [0.0]
        for e, (ln, c) in enumerate(edges, start=1):
            ln, c = float(ln), float(c)
            if not ln >= 0:
                raise InstanceError(f"edge {e} has negative length {ln}")
            if not c > 0:
                raise InstanceError(f"edge {e} has non-positive capacity {c}")
            length.append(ln)
            cap.append(c)
        self.tau = float(tau)
        self.n = len(weights)
        self.weights = [0.0] + weights
        self.length = length
        self.cap = cap

    @property
    def is_uniform(self) -> bool:
        caps = self.cap[1:]
        return all(c == caps[0] for c in caps) if caps else True

    def to_json(self) -> dict:
        return {
            "tau": self.tau,
            "vertices": [{"w": w} for w in self.weights[1:]],
            "edges": [
                {"len": self.length[e], "cap": self.cap[e]}
                for e in range(1, self.n)
            ],
        }


def parse_instance(text: str) -> PathNetwork:
    """Parse the JSON instance format into a validated :class:`PathNetwork`."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed instance JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    for field in ("tau", "vertices", "edges"):
        if field not in obj:
            raise InstanceError(f"instance missing field {field!r}")
    try:
        weights = [v["w"] for v in obj["vertices"]]
        edges = [(e["len"], e["cap"]) for e in obj["edges"]]
    except (TypeError, KeyError) as exc:
        raise InstanceError(f"bad vertex/edge entry: {exc!r}") from exc
    return PathNetwork(obj["tau"], weights, edges)


def load_instance(path: str) -> PathNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


class PrefixIndex:
    """O(1) range weight/distance queries and range-min capacity queries.

    Built once per network in O(n log n) (the log factor is the sparse table
    over edge capacities); all queries are pure.
    """

    __slots__ = ("net", "cw", "cd", "_rmq", "_rmq_log")

    def __init__(self, net: PathNetwork):
        self.net = net
        n = net.n
        cw = [0.0] * (n + 1)
        for i in range(1, n + 1):
            cw[i] = cw[i - 1] + net.weights[i]
        cd = [0.0] * (n + 1)
        for i in range(2, n + 1):
            cd[i] = cd[i - 1] + net.length[i - 1]
        self.cw = cw
        self.cd = cd
        # sparse table over edge capacities, 0-based rows over edges 1..n-1
        m = n - 1
        row = net.cap[1:]
        table = [row]
        k = 1
        while (1 << k) <= m:
            prev = table[-1]
            half = 1 << (k - 1)
            table.append(
                [min(prev[i], prev[i + half]) for i in range(m - (1 << k) + 1)]
            )
            k += 1
        self._rmq = table
        self._rmq_log = [0] * (m + 1)
        for i in range(2, m + 1):
            self._rmq_log[i] = self._rmq_log[i >> 1] + 1

    # --- vertex-range primitives -------------------------------------------

    def range_weight(self, i: int, j: int) -> float:
        """Total weight of vertices v_i..v_j."""
        if not 1 <= i <= j <= self.net.n:
            raise IndexError(f"bad vertex range [{i},{j}]")
        return self.cw[j] - self.cw[i - 1]

    def range_min_cap(self, e1: int, e2: int) -> float:
        """Minimum capacity over edges e1..e2; +inf for an empty range."""
        if e1 > e2:
            return INF
        if e1 < 1 or e2 > self.net.n - 1:
            raise IndexError(f"bad edge range [{e1},{e2}]")
        k = self._rmq_log[e2 - e1 + 1]
        row = self._rmq[k]
        return min(row[e1 - 1], row[e2 - (1 << k)])

    # --- point primitives ---------------------------------------------------

    def pos(self, p: Point) -> float:
        return self.cd[p.anchor] + p.offset

    def path_distance(self, p: Point, q: Point) -> float:
        """Prorated distance from p to q (requires p on or left of q)."""
        if q < p:
            raise ValueError("path_distance requires p on or left of q")
        return self.pos(q) - self.pos(p)

    def path_capacity(self, p: Point, q: Point) -> float:
        """Minimum capacity over edges whose interior meets the open segment
        (p, q); +inf when no edge does."""
        if q < p:
            raise ValueError("path_capacity requires p on or left of q")
        e_lo = p.anchor  # first edge to the right of (or containing) p
        e_hi = q.anchor - 1 if q.is_vertex else q.anchor
        return self.range_min_cap(e_lo, e_hi)

    # --- cost primitives ----------------------------------------------------

    def theta_L(self, i: int, h: int, sink: Point) -> float:
        """Completion time for the evacuees of v_i..v_h moving right to sink."""
        vh = Point.vertex(h)
        if sink < vh:
            raise ValueError("theta_L requires v_h on or left of sink")
        d = self.pos(sink) - self.cd[h]
        return d * self.net.tau + self.range_weight(i, h) / self.path_capacity(vh, sink)

    def theta_R(self, h: int, j: int, sink: Point) -> float:
        """Completion time for the evacuees of v_h..v_j moving left to sink."""
        vh = Point.vertex(h)
        if vh < sink:
            raise ValueError("theta_R requires sink on or left of v_h")
        d = self.cd[h] - self.pos(sink)
        return d * self.net.tau + self.range_weight(h, j) / self.path_capacity(sink, vh)

    def evacuation_time_ref(self, sink: Point, i: int, j: int) -> float:
        """Reference O(n) evacuation time for v_i..v_j with the given sink.

        Maximum over per-vertex completion times on both sides; used as the
        ground-truth oracle by the fast query structures.
        """
        vi, vj = Point.vertex(i), Point.vertex(j)
        if sink < vi or vj < sink:
            raise ValueError("sink outside queried subpath")
        if sink.is_vertex:
            l_hi = sink.anchor
            r_lo = sink.anchor
        else:
            l_hi = sink.anchor
            r_lo = sink.anchor + 1
        best = 0.0
        for h in range(i, l_hi + 1):
            best = max(best, self.theta_L(i, h, sink))
        for h in range(r_lo, j + 1):
            best = max(best, self.theta_R(h, j, sink))
        return best


def build_index(net: PathNetwork) -> PrefixIndex:
    """Build the prefix/range index for a validated network."""
    return PrefixIndex(net)
