"""Upper envelope of lines against a linear scan."""

import random

import pytest

from sinkpath.envelope import Line, build_upper_envelope, query_envelope


def rand_lines(rng, m):
    lines = [Line(rng.randint(-8, 8) + rng.random(), rng.uniform(-50, 50), t)
             for t in range(1, m + 1)]
    lines.sort(key=lambda l: l.slope)
    return lines


def test_single_line():
    env = build_upper_envelope([Line(2.0, 1.0, 7)])
    assert len(env) == 1
    assert env.query(3.0) == (7, 7.0)


def test_rejects_empty_and_unsorted():
    with pytest.raises(ValueError):
        build_upper_envelope([])
    with pytest.raises(AssertionError):
        build_upper_envelope([Line(2.0, 0.0, 1), Line(5.0, 0.0, 2),
                              Line(1.0, 0.0, 3)])


def test_duplicate_slopes_keep_higher_line():
    env = build_upper_envelope([Line(1.0, 0.0, 1), Line(1.0, 3.0, 2),
                                Line(2.0, 0.0, 3)])
    assert env.query(0.0) == (2, 3.0)


def test_descending_slope_order_accepted():
    asc = [Line(-1.0, 4.0, 1), Line(0.5, 0.0, 2), Line(3.0, -6.0, 3)]
    a = build_upper_envelope(asc)
    b = build_upper_envelope(list(reversed(asc)))
    for x in (-3.0, 0.0, 1.7, 5.0):
        assert a.query(x) == b.query(x)


def test_breakpoint_and_tie_rule():
    env = build_upper_envelope([Line(0.0, 2.0, 0), Line(1.0, 0.0, 1)])
    assert list(env.breaks) == [2.0]
    assert env.query(1.0) == (0, 2.0)
    assert env.query(3.0) == (1, 3.0)
    assert env.query(2.0) == (0, 2.0)  # tie at the breakpoint: smaller tag


def test_dominated_middle_line_removed():
    env = build_upper_envelope([Line(0.0, 2.0, 3), Line(1.0, 0.5, 2),
                                Line(2.0, 0.0, 1)])
    assert sorted(env.tags) == [1, 3]


def test_random_envelopes_match_scan():
    # queries live on the hull's documented domain x >= 0
    rng = random.Random(20)
    for _ in range(200):
        lines = rand_lines(rng, rng.randint(1, 30))
        env = build_upper_envelope(lines)
        assert len(env) <= len(lines)
        assert all(a < b for a, b in zip(env.breaks, env.breaks[1:]))
        for _ in range(40):
            x = rng.uniform(0.0, 30.0)
            tag, val = query_envelope(env, x)
            sval = max(l.slope * x + l.intercept for l in lines)
            assert abs(val - sval) <= 1e-9 * max(1.0, abs(sval))
            got = next(l for l in lines if l.tag == tag)
            attained = got.slope * x + got.intercept
            assert abs(attained - sval) <= 1e-9 * max(1.0, abs(sval))
