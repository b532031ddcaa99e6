"""Minmax k-sink location on dynamic path networks."""

from .model import (
    InstanceError,
    PathNetwork,
    Point,
    PrefixIndex,
    build_index,
    load_instance,
    parse_instance,
    within,
)
from .solver import (
    SinkEngine,
    SolvePlan,
    feasible,
    find_1sink,
    isolate_subpath,
    make_engine,
    solve_ksink,
    sorted_matrix_search,
    bisect_search,
)
from .oracle import oracle_1sink, oracle_feasible, oracle_ksink_dp

__all__ = [
    "InstanceError",
    "PathNetwork",
    "Point",
    "PrefixIndex",
    "build_index",
    "load_instance",
    "parse_instance",
    "within",
    "SinkEngine",
    "SolvePlan",
    "feasible",
    "find_1sink",
    "isolate_subpath",
    "make_engine",
    "solve_ksink",
    "sorted_matrix_search",
    "bisect_search",
    "oracle_1sink",
    "oracle_feasible",
    "oracle_ksink_dp",
]

__version__ = "0.1.0"
