"""General-capacity query tree against the direct-maximization oracle."""

import math
import random

import pytest

from conftest import make_f1, make_f2, rel_ok
from sinkpath.cctree import CCTree
from sinkpath.model import Point, build_index, within
from sinkpath.oracle import theta_l_direct, theta_r_direct
from test_model import rand_net


def make_tree(net):
    return CCTree(build_index(net))


def test_golden_theta_values():
    t1 = make_tree(make_f1())
    assert t1.theta_L(1, 3) == (1, pytest.approx(6.0))
    assert t1.theta_L(1, 4) == (1, pytest.approx(9.0))
    t2 = make_tree(make_f2())
    assert t2.theta_R(2, 4, Point.vertex(1)) == (4, pytest.approx(11.0))


def test_sink_at_vertex_convention():
    # at the right end of the path the sink sits on the vertex itself,
    # so edge n-1 is the last one that throttles the flow
    t = make_tree(make_f1())
    assert t.theta_L(1, 4) == t.theta_L(1, 4, sink_at_vertex=True)
    assert t.theta_L(1, 3, sink_at_vertex=False)[1] >= t.theta_L(
        1, 3, sink_at_vertex=True)[1]


def test_canonical_nodes_partition():
    rng = random.Random(3)
    for n in (1, 2, 5, 16, 33, 64):
        tree = make_tree(rand_net(rng, n) if n > 1 else
                         rand_net(rng, 2))
        n = tree.n
        for _ in range(30):
            i = rng.randint(1, n)
            j = rng.randint(i, n)
            nodes = tree.canonical_nodes(i, j)
            spans = sorted((u.lo, u.hi) for u in nodes)
            assert spans[0][0] == i and spans[-1][1] == j
            for (a, b), (c, d) in zip(spans, spans[1:]):
                assert c == b + 1
            assert len(nodes) <= 2 * math.ceil(math.log2(n)) + 2


def test_theta_matches_direct_oracle():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(2, 28)
        net = rand_net(rng, n)
        tree = make_tree(net)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                assert rel_ok(tree.theta_L(i, j)[1], theta_l_direct(net, i, j))
                s = Point.vertex(i)
                assert rel_ok(tree.theta_R(i, j, s)[1],
                              theta_r_direct(net, i, j, s))


def test_theta_r_edge_limit_matches_direct():
    rng = random.Random(12)
    for _ in range(20):
        n = rng.randint(3, 24)
        net = rand_net(rng, n)
        tree = make_tree(net)
        for _ in range(30):
            e = rng.randint(1, n - 1)
            j = rng.randint(e + 1, n)
            x = rng.uniform(1e-6, net.length[e])
            got = tree.theta_R_edge_limit(e, x, j)
            want = theta_r_direct(net, e + 1, j, Point.on_edge(net, e, x))
            assert rel_ok(got[1], want)


def test_coverage_walks_match_linear_scan():
    rng = random.Random(13)
    for _ in range(25):
        n = rng.randint(2, 24)
        net = rand_net(rng, n)
        tree = make_tree(net)
        for _ in range(15):
            a = rng.randint(1, n)
            t = rng.uniform(0.0, theta_l_direct(net, 1, n) * 1.2)
            best = None
            for b in range(a, n + 1):
                if tree.l_test(a, b, t):
                    best = b
            assert tree.max_l_covered(a, t) == best
            c0 = rng.randint(1, n)
            s = Point.vertex(rng.randint(1, c0))
            best = None
            for d in range(c0, n + 1):
                if tree.r_test(c0, d, s, t):
                    best = d
            assert tree.max_r_covered(c0, s, t) == best


def test_tests_consistent_with_costs():
    tree = make_tree(make_f1())
    t = tree.theta_L(1, 3)[1]
    assert tree.l_test(1, 3, t)
    assert not tree.l_test(1, 3, t * (1 - 1e-7))
