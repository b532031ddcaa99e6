"""Command-line front end: gen / solve / feasible / verify / bench.

Exit codes: 0 success, 1 verification or internal assertion failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time as _time

from .model import InstanceError, PathNetwork, Point, build_index, load_instance, within
from .solver import SolvePlan, make_engine, solve_ksink

USAGE_ERROR = 2
CHECK_ERROR = 1


def _fmt(t: float) -> str:
    return format(t, ".12g")


def _parse_range(text: str, name: str):
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise InstanceError(f"{name} must look like LO:HI, got {text!r}")
    if lo < 1 or hi < lo:
        raise InstanceError(f"{name} needs 1 <= LO <= HI, got {text!r}")
    return lo, hi


def generate_instance(n, seed, w_range=(1, 100), len_range=(1, 10),
                      cap_range=(1, 5), uniform=False) -> PathNetwork:
    """Deterministic random instance for (n, seed, ranges)."""
    rng = random.Random(seed)
    weights = [rng.randint(*w_range) for _ in range(n)]
    lengths = [rng.randint(*len_range) for _ in range(n - 1)]
    if uniform:
        c = rng.randint(*cap_range)
        caps = [c] * (n - 1)
    else:
        caps = [rng.randint(*cap_range) for _ in range(n - 1)]
    return PathNetwork(1.0, weights, list(zip(lengths, caps)))


def cmd_gen(args) -> int:
    ranges = {}
    for name in ("w_range", "len_range", "cap_range"):
        ranges[name] = _parse_range(getattr(args, name), name.replace("_", "-"))
    net = generate_instance(args.n, args.seed, uniform=args.uniform, **ranges)
    text = json.dumps(net.to_json(), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def plan_document(plan: SolvePlan) -> dict:
    return plan.to_json()


def cmd_solve(args) -> int:
    net = load_instance(args.input)
    if args.k < 1:
        raise InstanceError("k must be >= 1")
    plan = solve_ksink(net, args.k, backend=args.backend,
                       optimizer=args.optimizer)
    doc = plan_document(plan)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    print(_fmt(plan.time))
    return 0


def cmd_feasible(args) -> int:
    net = load_instance(args.input)
    if args.k < 1 or args.t < 0:
        raise InstanceError("need k >= 1 and t >= 0")
    from .solver import feasible

    engine = make_engine(net, args.backend)
    ok, plan = feasible(engine, args.t, args.k)
    if ok:
        parts = " ".join(f"[{a},{b}]" for a, b in plan.partition)
        print(f"yes {parts}")
    else:
        print("no")
    return 0


def cmd_verify(args) -> int:
    net = load_instance(args.input)
    with open(args.plan) as fh:
        doc = json.load(fh)
    t = float(doc["time"])
    segs = []
    for seg, sink_doc in zip(doc["partition"], doc["sinks"]):
        a, b = int(seg[0]), int(seg[1])
        segs.append((a, b, Point.from_json(net, sink_doc)))
    segs.sort()
    cover = 1
    for a, b, _ in segs:
        if a != cover or b < a:
            print(f"coverage gap at segment [{a},{b}] (expected start {cover})")
            return CHECK_ERROR
        cover = b + 1
    if cover != net.n + 1:
        print(f"partition stops at vertex {cover - 1}, path has {net.n}")
        return CHECK_ERROR
    idx = build_index(net)
    worst = 0.0
    for a, b, sink in segs:
        p = idx.pos(sink)
        if not (idx.cd[a] <= p <= idx.cd[b]):
            print(f"sink outside its segment [{a},{b}]")
            return CHECK_ERROR
        cost = idx.evacuation_time_ref(sink, a, b)
        worst = max(worst, cost)
        if not within(cost, t):
            print(f"segment [{a},{b}] evacuates in {_fmt(cost)} > {_fmt(t)}")
            return CHECK_ERROR
    print(f"ok {_fmt(worst)}")
    return 0


def cmd_bench(args) -> int:
    try:
        ns = [int(p) for p in args.n_list.split(",")]
    except ValueError:
        raise InstanceError(f"bad n-list {args.n_list!r}")
    if not ns or any(n < 1 for n in ns):
        raise InstanceError("n-list entries must be >= 1")
    writer = csv.writer(sys.stdout if not args.csv else open(args.csv, "w", newline=""))
    writer.writerow(["n", "k", "seed", "backend", "build_ms", "feas_ops",
                     "solve_ms", "tstar"])
    for n in ns:
        net = generate_instance(n, args.seed, uniform=(args.backend == "uniform"))
        t0 = _time.perf_counter()
        engine = make_engine(net, args.backend)
        build_ms = (_time.perf_counter() - t0) * 1000.0
        from .solver import feasible, sorted_matrix_search

        t0 = _time.perf_counter()
        tstar = sorted_matrix_search(engine, args.k)
        solve_ms = (_time.perf_counter() - t0) * 1000.0
        engine.reset_ops()
        feasible(engine, tstar, args.k)
        ops = engine.ops
        writer.writerow([n, args.k, args.seed, engine.backend,
                         f"{build_ms:.3f}", ops, f"{solve_ms:.3f}", _fmt(tstar)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sinkpath",
                                 description="minmax k-sink location on dynamic path networks")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--w-range", dest="w_range", default="1:100")
    g.add_argument("--len-range", dest="len_range", default="1:10")
    g.add_argument("--cap-range", dest="cap_range", default="1:5")
    g.add_argument("--uniform", action="store_true")
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("solve", help="solve the k-sink problem")
    s.add_argument("input")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--backend", choices=("auto", "general", "uniform"), default="auto")
    s.add_argument("--optimizer", choices=("sorted-matrix", "bisect"),
                   default="sorted-matrix")
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_solve)

    f = sub.add_parser("feasible", help="test (t,k)-feasibility")
    f.add_argument("input")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--t", type=float, required=True)
    f.add_argument("--backend", choices=("auto", "general", "uniform"), default="auto")
    f.set_defaults(fn=cmd_feasible)

    v = sub.add_parser("verify", help="recheck a solve plan against its instance")
    v.add_argument("input")
    v.add_argument("plan")
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bench", help="timing and counter benchmarks")
    b.add_argument("--n-list", dest="n_list", required=True)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--backend", choices=("auto", "general", "uniform"), default="general")
    b.add_argument("--csv", default=None)
    b.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (InstanceError, FileNotFoundError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return CHECK_ERROR


if __name__ == "__main__":
    sys.exit(main())
