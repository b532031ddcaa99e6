"""Command-line front end: exit codes, output formats, round trips."""

import csv
import io
import json

import pytest

from conftest import make_f1, make_f2
from sinkpath.cli import main


def write_net(tmp_path, net, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(net.to_json()))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["gen", "--n", "4", "--seed", "7", "--out", str(a)]) == 0
    assert main(["gen", "--n", "4", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_uniform_and_single_vertex(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--n", "6", "--seed", "1", "--uniform")
    assert code == 0
    doc = json.loads(out)
    caps = {e["cap"] for e in doc["edges"]}
    assert len(caps) == 1
    code, out, _ = run(capsys, "gen", "--n", "1", "--seed", "1")
    assert code == 0
    assert json.loads(out)["edges"] == []


def test_gen_bad_range(capsys):
    code, _, err = run(capsys, "gen", "--n", "4", "--w-range", "9:2")
    assert code == 2


def test_solve_f1(tmp_path, capsys):
    inst = write_net(tmp_path, make_f1())
    code, out, _ = run(capsys, "solve", inst, "--k", "2")
    assert code == 0
    assert float(out.strip()) == pytest.approx(4.0)


def test_solve_backends_agree_on_uniform(tmp_path, capsys):
    inst = write_net(tmp_path, make_f2())
    outs = []
    for backend in ("uniform", "general"):
        code, out, _ = run(capsys, "solve", inst, "--k", "1",
                           "--backend", backend)
        assert code == 0
        outs.append(out.strip())
    assert outs[0] == outs[1]
    assert float(outs[0]) == pytest.approx(7.0)


def test_solve_k_zero_usage_error(tmp_path, capsys):
    inst = write_net(tmp_path, make_f1())
    code, _, err = run(capsys, "solve", inst, "--k", "0")
    assert code == 2


def test_solve_missing_file(capsys):
    code, _, _ = run(capsys, "solve", "/nonexistent.json", "--k", "1")
    assert code == 2


def test_feasible_golden_threshold(tmp_path, capsys):
    inst = write_net(tmp_path, make_f1())
    code, out, _ = run(capsys, "feasible", inst, "--k", "3", "--t", "1.25")
    assert code == 0 and out.startswith("yes")
    code, out, _ = run(capsys, "feasible", inst, "--k", "3", "--t", "1.2")
    assert code == 0 and out.strip() == "no"
    code, out, _ = run(capsys, "feasible", inst, "--k", "5", "--t", "0")
    assert code == 0 and out.startswith("yes")


def test_verify_round_trip_and_tampering(tmp_path, capsys):
    inst = write_net(tmp_path, make_f1())
    plan = tmp_path / "plan.json"
    assert main(["solve", inst, "--k", "2", "--out", str(plan)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "verify", inst, str(plan))
    assert code == 0 and out.startswith("ok")

    doc = json.loads(plan.read_text())
    moved = dict(doc)
    sink = dict(doc["sinks"][0])
    if "vertex" in sink:
        sink = {"edge": min(sink["vertex"], 3), "offset": 1.0}
    else:
        sink["offset"] += 1.0
    moved["sinks"] = [sink] + doc["sinks"][1:]
    bad = tmp_path / "moved.json"
    bad.write_text(json.dumps(moved))
    code, out, _ = run(capsys, "verify", inst, str(bad))
    assert code == 1

    short = dict(doc)
    short["partition"] = [p for p in doc["partition"] if p[1] != 4]
    short["sinks"] = doc["sinks"][:len(short["partition"])]
    bad2 = tmp_path / "short.json"
    bad2.write_text(json.dumps(short))
    code, out, _ = run(capsys, "verify", inst, str(bad2))
    assert code == 1


def test_bench_csv(tmp_path, capsys):
    out_csv = tmp_path / "bench.csv"
    assert main(["bench", "--n-list", "64,128", "--k", "2", "--seed", "3",
                 "--csv", str(out_csv)]) == 0
    rows = list(csv.DictReader(out_csv.open()))
    assert [r["n"] for r in rows] == ["64", "128"]
    assert int(rows[0]["feas_ops"]) <= int(rows[1]["feas_ops"])
    # determinism: same seed reproduces tstar
    out2 = tmp_path / "bench2.csv"
    assert main(["bench", "--n-list", "64,128", "--k", "2", "--seed", "3",
                 "--csv", str(out2)]) == 0
    rows2 = list(csv.DictReader(out2.open()))
    assert [r["tstar"] for r in rows] == [r["tstar"] for r in rows2]


def test_bench_uniform_cheaper(tmp_path, capsys):
    ops = {}
    for backend in ("general", "uniform"):
        out_csv = tmp_path / f"b_{backend}.csv"
        assert main(["bench", "--n-list", "256", "--k", "2", "--seed", "9",
                     "--backend", backend, "--csv", str(out_csv)]) == 0
        row = next(csv.DictReader(out_csv.open()))
        ops[backend] = int(row["feas_ops"])
    assert ops["uniform"] < ops["general"]


def test_bench_bad_args(capsys):
    code, _, _ = run(capsys, "bench", "--n-list", "0,abc")
    assert code == 2


def test_no_subcommand_usage_error(capsys):
    assert main([]) == 2
