"""Engine-level solving: one sink, greedy feasibility, full optimization."""

import random

import pytest

from conftest import make_f1, make_f2, rel_ok
from sinkpath.model import Point, build_index
from sinkpath.oracle import one_sink_time_table, oracle_1sink, oracle_ksink_dp
from sinkpath.solver import (OptMatrixView, bisect_search, feasible,
                             find_1sink, make_engine, solve_ksink,
                             sorted_matrix_search)
from test_model import rand_net
from test_uniform import rand_uniform_net


def test_find_1sink_goldens():
    eng = make_engine(make_f1())
    sink, time = find_1sink(eng, 1, 4)
    assert time == pytest.approx(7.0)
    assert (sink.anchor, sink.offset) == (3, pytest.approx(1.0))
    for (i, j), want in (((1, 3), 4.0), ((2, 4), 5.5), ((1, 2), 3.0),
                         ((2, 3), 1.25)):
        assert find_1sink(eng, i, j)[1] == pytest.approx(want)
    assert find_1sink(eng, 2, 2) == (Point.vertex(2), 0.0)


def test_find_1sink_matches_oracle():
    rng = random.Random(51)
    for _ in range(40):
        n = rng.randint(2, 40)
        net = rand_net(rng, n)
        eng = make_engine(net)
        idx = eng.idx
        for _ in range(8):
            i = rng.randint(1, n)
            j = rng.randint(i, n)
            sink, time = find_1sink(eng, i, j)
            assert rel_ok(time, oracle_1sink(net, i, j)[1])
            assert rel_ok(idx.evacuation_time_ref(sink, i, j), time)


def test_feasible_structure():
    eng = make_engine(make_f1())
    ok, plan = feasible(eng, 4.0, 2)
    assert ok
    segs = plan.segments
    assert segs[0].a == 1 and segs[-1].d == 4
    for s, t in zip(segs, segs[1:]):
        assert t.a == s.d + 1
    assert not feasible(eng, 3.9, 2)[0]
    assert not feasible(eng, -1.0, 2)[0]
    assert feasible(eng, 0.0, 4)[0]


def test_solve_plan_covers_path_and_time_checks_out():
    rng = random.Random(52)
    for _ in range(25):
        n = rng.randint(2, 40)
        net = rand_net(rng, n)
        k = rng.randint(1, 4)
        plan = solve_ksink(net, k)
        idx = build_index(net)
        assert plan.partition[0][0] == 1 and plan.partition[-1][1] == n
        worst = 0.0
        for seg in plan.segments:
            if seg.a > seg.d:
                continue  # spare sink beyond the right end
            worst = max(worst, idx.evacuation_time_ref(seg.sink, seg.a, seg.d))
        assert worst <= plan.time * (1 + 1e-9)


def test_optimizers_agree():
    rng = random.Random(53)
    for _ in range(30):
        n = rng.randint(2, 32)
        net = rand_net(rng, n)
        k = rng.randint(1, 5)
        eng = make_engine(net)
        a = sorted_matrix_search(eng, k)
        b = bisect_search(eng, k)
        c = oracle_ksink_dp(net, min(k, n))[0]
        assert rel_ok(a, c) and rel_ok(b, c)


def test_opt_matrix_entries_match_oracle_table():
    rng = random.Random(54)
    net = rand_net(rng, 17)
    n = net.n
    eng = make_engine(net)
    view = OptMatrixView(eng)
    tab = one_sink_time_table(net)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            l = n - i + 1
            want = tab[l][j] if l <= j else 0.0
            assert rel_ok(view.entry(i, j), want)


def test_backend_explicit_choices():
    net = make_f2()
    ts = [solve_ksink(net, 1, backend=b).time
          for b in ("auto", "general", "uniform")]
    assert ts[0] == pytest.approx(7.0)
    assert ts[0] == ts[1] == ts[2]
    with pytest.raises(ValueError):
        make_engine(net, backend="nope")
    with pytest.raises(ValueError):
        make_engine(make_f1(), backend="uniform")  # caps are not uniform


def test_k_clamped_to_n():
    net = make_f1()
    assert solve_ksink(net, 10).time == 0.0


def test_uniform_backend_solves_match_general():
    rng = random.Random(55)
    for _ in range(20):
        n = rng.randint(2, 64)
        net = rand_uniform_net(rng, n)
        k = rng.randint(1, 4)
        a = solve_ksink(net, k, backend="general").time
        b = solve_ksink(net, k, backend="uniform").time
        assert rel_ok(a, b)
