import csv
import json
import subprocess
import sys

from ordfix import parse_instance
from ordfix.cli import falsify, run_command
from ordfix.instances import get_instance, instance_to_json


def _run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(capsys, *argv):
    code, out, _ = _run(capsys, *argv)
    return code, json.loads(out)


def test_suite_all_pass(capsys):
    code, doc = _json(capsys, "suite", "--library", "half-map-grid", "--theorem", "T2", "--alpha", "0.5")
    assert code == 0
    assert doc["hypotheses_hold"] and doc["conclusions_hold"] and doc["implication_respected"]


def test_suite_failure_is_exit_one(capsys):
    code, doc = _json(capsys, "suite", "--library", "two-components", "--theorem", "T2", "--alpha", "0.5")
    assert code == 1
    assert doc["hypotheses"]["b03"]["status"] == "fail"


def test_suite_builds_series_metric_for_t3(capsys):
    code, doc = _json(capsys, "suite", "--library", "half-map-grid", "--theorem", "T3", "--alpha", "0.5")
    assert code == 0 and doc["theorem"] == "T3-Maia"
    code, doc = _json(capsys, "suite", "--library", "two-components", "--theorem", "T3", "--alpha", "0.5")
    assert code == 1 and doc["precondition_failed"] == "b03"


def test_suite_gauge_flag(capsys):
    code, doc = _json(
        capsys, "suite", "--library", "half-map-grid", "--theorem", "T9", "--gauge", '{"family":"linear","alpha":0.5}'
    )
    assert code == 0
    code, _, err = _run(capsys, "suite", "--library", "half-map-grid", "--theorem", "T4", "--gauge", "{bad")
    assert code == 2 and "--gauge" in err


def test_solve_cycle_exit_and_witness(capsys):
    code, doc = _json(capsys, "solve", "--library", "two-cycle", "--start", "0")
    assert code == 1
    r = doc["results"][0]
    assert r["converged"] is False and r["witness"] == [0, 1, 0]


def test_solve_writes_trace(capsys, tmp_path):
    out = tmp_path / "trace.csv"
    code, doc = _json(capsys, "solve", "--library", "half-map-grid", "--start", "4", "--alpha", "0.5", "--out", str(out))
    assert code == 0 and doc["results"][0]["fixed_point"] == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["step", "point", "step_distance", "bound"]
    assert [r[1] for r in rows[1:]] == ["4", "2", "1", "0"]


def test_check_variants(capsys):
    code, doc = _json(capsys, "check", "--library", "half-map-grid", "--variant", "a02", "--alpha", "0.5")
    assert code == 0 and doc["contraction"]["holds"]
    code, doc = _json(capsys, "check", "--library", "two-cycle", "--variant", "b04", "--alpha", "0.5")
    assert code == 1 and doc["contraction"]["witness"] == [0, 1]
    code, doc = _json(capsys, "check", "--library", "bounds-lattice")
    assert code == 0 and doc["bounds"]["a05"]
    code, _, _ = _run(capsys, "check", "--library", "half-map-grid", "--variant", "e07")
    assert code == 2
    code, _, _ = _run(capsys, "check", "--library", "half-map-grid", "--variant", "zz9", "--alpha", "0.5")
    assert code == 2


def test_maia_command(capsys):
    code, doc = _json(capsys, "maia", "--library", "half-map-analytic", "--alpha", "0.5", "--lambda", "1.5")
    assert code == 0
    assert doc["metric"]["lambda"] == 1.5 and doc["properties"]["identity"]
    code, doc = _json(capsys, "maia", "--library", "two-components", "--alpha", "0.5")
    assert code == 1 and doc["precondition_failed"] == "b03"
    code, _, _ = _run(capsys, "maia", "--library", "half-map-grid", "--alpha", "0.5", "--lambda", "3")
    assert code == 2


def test_falsify_finds_dropped_hypotheses(capsys):
    code, doc = _json(capsys, "falsify", "--theorem", "T2", "--drop", "b03", "--trials", "1000", "--seed", "7")
    assert code == 0
    ce = doc["counterexample"]
    assert ce["verdict"]["hypotheses"]["b03"]["status"] == "fail"
    assert not ce["verdict"]["conclusions_hold"]
    # the reported instance re-parses and reproduces the verdict
    spec = parse_instance(json.dumps(ce["instance"]))
    assert spec.space.n == ce["instance"]["n"]


def test_falsify_without_drop_finds_nothing(capsys):
    code, doc = _json(capsys, "falsify", "--theorem", "T4", "--trials", "60", "--seed", "3")
    assert code == 0 and doc["counterexample"] is None


def test_falsify_rejects_foreign_hypothesis(capsys):
    code, _, err = _run(capsys, "falsify", "--theorem", "T2", "--drop", "c05", "--trials", "5")
    assert code == 2 and "c05" in err


def test_gen_round_trip(capsys, tmp_path):
    out = tmp_path / "inst.json"
    code, doc = _json(capsys, "gen", "--gen", "n=5,target=T4", "--seed", "9", "--out", str(out))
    assert code == 0 and doc["n"] == 5
    again = parse_instance(out.read_text())
    assert instance_to_json(again) == doc
    code, doc2 = _json(capsys, "suite", "--instance", str(out), "--theorem", "T4")
    assert code == 0 and doc2["implication_respected"]


def test_input_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "dist": [[0, 1], [1]]}')
    code, _, err = _run(capsys, "check", "--instance", str(bad))
    assert code == 2 and "$.dist[1]" in err
    code, _, _ = _run(capsys, "check", "--instance", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = _run(capsys, "suite", "--library", "half-map-grid")
    assert code == 2
    code, _, _ = _run(capsys, "suite", "--library", "nope", "--theorem", "T2")
    assert code == 2
    code, _, _ = _run(capsys, "gen", "--gen", "n=0")
    assert code == 2
    code, _, _ = _run(capsys, "check", "--library", "half-map-grid", "--instance", "x.json")
    assert code == 2


def test_falsify_function_is_deterministic():
    a = falsify("T4", ["c05"], trials=200, seed=0)
    b = falsify("T4", ["c05"], trials=200, seed=0)
    assert a is not None and a[0] == b[0]
    assert instance_to_json(a[1]) == instance_to_json(b[1])


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ordfix.cli", "suite", "--library", "half-map-grid", "--theorem", "T2", "--alpha", "0.5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["theorem"] == "T2"


def test_library_instance_exports():
    doc = instance_to_json(get_instance("half-map-grid"))
    assert doc["selfmap"] == [0, 0, 1, 1, 2]
