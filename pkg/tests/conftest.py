"""Shared fixtures: two small hand-checked networks and helpers."""

import pytest

from sinkpath.model import PathNetwork, build_index


def make_f1() -> PathNetwork:
    """4 vertices, mixed capacities; used for most golden values."""
    return PathNetwork(1.0, [3.0, 1.0, 2.0, 5.0],
                       [(2.0, 1.0), (1.0, 2.0), (3.0, 1.0)])


def make_f2() -> PathNetwork:
    """Same as f1 but all capacities 1 (uniform)."""
    return PathNetwork(1.0, [3.0, 1.0, 2.0, 5.0],
                       [(2.0, 1.0), (1.0, 1.0), (3.0, 1.0)])


@pytest.fixture
def f1():
    return make_f1()


@pytest.fixture
def f2():
    return make_f2()


@pytest.fixture
def f1_idx():
    return build_index(make_f1())


def rel_ok(got: float, want: float, tol: float = 1e-9) -> bool:
    return abs(got - want) <= tol * max(1.0, abs(want))
