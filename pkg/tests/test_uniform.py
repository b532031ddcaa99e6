"""Uniform-capacity query tree: oracle equivalence and parity with the
general tree."""

import random

import pytest

from conftest import make_f2, rel_ok
from sinkpath.cctree import CCTree
from sinkpath.model import PathNetwork, Point, build_index
from sinkpath.oracle import theta_l_direct, theta_r_direct
from sinkpath.uniform import build_uniform_tree


def rand_uniform_net(rng, n):
    w = [rng.randint(1, 100) for _ in range(n)]
    c = rng.randint(1, 5)
    edges = [(rng.randint(1, 10), c) for _ in range(n - 1)]
    return PathNetwork(1.0, w, edges)


def test_golden_values_f2():
    tree = build_uniform_tree(build_index(make_f2()))
    assert tree.theta_L(1, 3) == (1, pytest.approx(6.0))
    assert tree.theta_L(1, 4) == (1, pytest.approx(9.0))
    assert tree.theta_R(2, 4, Point.vertex(1)) == (4, pytest.approx(11.0))


def test_theta_matches_direct_oracle():
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(2, 28)
        net = rand_uniform_net(rng, n)
        tree = build_uniform_tree(build_index(net))
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                assert rel_ok(tree.theta_L(i, j)[1], theta_l_direct(net, i, j))
                s = Point.vertex(i)
                assert rel_ok(tree.theta_R(i, j, s)[1],
                              theta_r_direct(net, i, j, s))


def test_agrees_with_general_tree():
    rng = random.Random(32)
    for _ in range(20):
        n = rng.randint(2, 48)
        net = rand_uniform_net(rng, n)
        idx = build_index(net)
        uni = build_uniform_tree(idx)
        gen = CCTree(idx)
        for _ in range(60):
            i = rng.randint(1, n)
            j = rng.randint(i, n)
            assert rel_ok(uni.theta_L(i, j)[1], gen.theta_L(i, j)[1])
            s = Point.vertex(rng.randint(1, i))
            assert rel_ok(uni.theta_R(i, j, s)[1], gen.theta_R(i, j, s)[1])
            t = rng.uniform(0.0, 1.2 * gen.theta_L(1, n)[1])
            assert uni.max_l_covered(i, t) == gen.max_l_covered(i, t)
            # the right walk requires the sink strictly left of its start
            if n >= 2:
                sv = rng.randint(1, n - 1)
                c0 = rng.randint(sv + 1, n)
                sp = Point.vertex(sv)
                assert (uni.max_r_covered(c0, sp, t)
                        == gen.max_r_covered(c0, sp, t))


def test_coverage_walks_match_linear_scan():
    rng = random.Random(33)
    for _ in range(20):
        n = rng.randint(2, 24)
        net = rand_uniform_net(rng, n)
        tree = build_uniform_tree(build_index(net))
        for _ in range(12):
            a = rng.randint(1, n)
            t = rng.uniform(0.0, theta_l_direct(net, 1, n) * 1.2)
            best = None
            for b in range(a, n + 1):
                if tree.l_test(a, b, t):
                    best = b
            assert tree.max_l_covered(a, t) == best
