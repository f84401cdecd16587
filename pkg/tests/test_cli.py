import csv
import json

import pytest

from rsic.bench import HEADER
from rsic.cli import main
from rsic.core import (EXAMPLE_1, Instance, dump_json, instance_to_dict, load_instance,
                       load_schedule, schedule_cost, verify_schedule)


@pytest.fixture
def ex1(tmp_path):
    p = tmp_path / "ex1.json"
    dump_json(instance_to_dict(EXAMPLE_1), p)
    return p


def out_lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_run_example1(ex1, tmp_path, capsys):
    sched_path = tmp_path / "s.json"
    assert main(["run", str(ex1), "--policy", "first_fit", "--out", str(sched_path)]) == 0
    (line,) = out_lines(capsys)
    assert line.split() == ["first_fit", "15", "13", "1.1538"]
    sched = load_schedule(sched_path)
    assert verify_schedule(EXAMPLE_1, sched) == []
    assert schedule_cost(sched) == 15


def test_run_unknown_policy(ex1):
    assert main(["run", str(ex1), "--policy", "bogus_policy"]) == 3


def test_run_empty_instance(tmp_path, capsys):
    p = tmp_path / "empty.json"
    dump_json(instance_to_dict(Instance(1, 10, 1)), p)
    assert main(["run", str(p), "--policy", "greedy"]) == 0
    assert out_lines(capsys)[0].split()[1:] == ["0", "0", "n/a"]


def test_run_bad_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad), "--policy", "first_fit"]) == 2
    assert main(["run", str(tmp_path / "missing.json"), "--policy", "first_fit"]) == 2
    invalid = tmp_path / "invalid.json"
    doc = instance_to_dict(EXAMPLE_1)
    doc["jobs"][0]["size"] = [11, 2]
    invalid.write_text(json.dumps(doc))
    assert main(["run", str(invalid), "--policy", "first_fit"]) == 2


def test_gen_writes_metadata(tmp_path):
    p = tmp_path / "g.json"
    assert main(["gen", "--d", "2", "--n", "20", "--T", "50", "--mu", "5", "--seed", "4",
                 "--out", str(p)]) == 0
    doc = json.loads(p.read_text())
    assert doc["metadata"]["params"]["seed"] == 4
    assert len(load_instance(p).jobs) == 20
    assert main(["gen", "--n", "3", "--T", "2", "--mu", "2"]) == 3


def test_lb_and_opt(ex1, capsys):
    assert main(["lb", str(ex1)]) == 0
    lines = dict(l.split() for l in out_lines(capsys))
    assert lines["opt_lower_bound"] == "13" and lines["span"] == "9"
    assert main(["opt", str(ex1)]) == 0
    assert out_lines(capsys)[0].split()[:2] == ["opt", "15"]
    assert main(["opt", str(ex1), "--limit", "3"]) == 2


def test_adversary_det(capsys):
    assert main(["adversary", "--k", "2", "--mu", "4", "--policy", "first_fit"]) == 0
    doc_line, summary = out_lines(capsys)
    doc = json.loads(doc_line)
    assert doc["alg_bins"] >= 6 and doc["adv_servers"] <= 4
    assert summary.startswith("alg_bins ")


def test_adversary_k1_mtf(capsys):
    assert main(["adversary", "--k", "1", "--mu", "1", "--policy", "mtf"]) == 0
    doc = json.loads(out_lines(capsys)[0])
    assert doc["alg_cost"] == doc["adv_cost"] == 2 and doc["ratio"] == "1.0000"


def test_adversary_rand_replay(capsys):
    argv = ["adversary", "--k", "2", "--mu", "4", "--policy", "first_fit", "--rand-seed", "1"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert main(["adversary", "--k", "2", "--mu", "4", "--policy", "nope"]) == 3


def test_bench_rows_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["bench", "--policies", "greedy,first_fit", "--d", "1", "--T", "100",
            "--mu", "1,5", "--n", "200", "--trials", "3", "--seed", "5"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.reader(a.open()))
    assert tuple(rows[0]) == HEADER
    assert [(r[0], r[3]) for r in rows[1:]] == [("greedy", "1"), ("greedy", "5"),
                                               ("first_fit", "1"), ("first_fit", "5")]
    assert all(float(r[9]) >= 1 for r in rows[1:])
    assert "ratio=" in rows[1][10] and "best_fit" in rows[1][10]


def test_bench_single_job_ratio_one(tmp_path):
    p = tmp_path / "one.csv"
    assert main(["bench", "--policies", "next_fit", "--T", "10", "--mu", "2", "--n", "1",
                 "--trials", "1", "--out", str(p)]) == 0
    row = list(csv.DictReader(p.open()))[0]
    assert float(row["ratio"]) == 1.0


def test_bench_error_row_keeps_other_cells(tmp_path):
    p = tmp_path / "e.csv"
    assert main(["bench", "--policies", "first_fit", "--T", "10", "--mu", "5,20", "--n", "10",
                 "--trials", "1", "--out", str(p)]) == 0
    rows = list(csv.DictReader(p.open()))
    assert rows[0]["ratio"] and not rows[1]["ratio"]
    assert rows[1]["notes"].startswith("error")


def test_bench_unknown_policy():
    assert main(["bench", "--policies", "bogus", "--n", "5", "--trials", "1"]) == 3


def test_plot(tmp_path):
    csv_path, svg_path = tmp_path / "g.csv", tmp_path / "g.svg"
    assert main(["bench", "--policies", "greedy,next_fit,first_fit", "--T", "100",
                 "--mu", "1,2,5,10,20", "--n", "50", "--trials", "1", "--out", str(csv_path),
                 "--svg", str(svg_path)]) == 0
    svg = svg_path.read_text()
    assert svg.startswith("<svg") and svg.count("<circle") == 15
    again = tmp_path / "again.svg"
    assert main(["plot", str(csv_path), "--out", str(again)]) == 0
    assert again.read_text() == svg


def test_plot_header_only_and_missing_column(tmp_path):
    head = tmp_path / "h.csv"
    head.write_text(",".join(HEADER) + "\n")
    assert main(["plot", str(head), "--out", str(tmp_path / "h.svg")]) == 0
    assert "<circle" not in (tmp_path / "h.svg").read_text()
    bad = tmp_path / "bad.csv"
    bad.write_text("policy,d,T,mu\nx,1,1,1\n")
    assert main(["plot", str(bad), "--out", str(tmp_path / "b.svg")]) == 2
