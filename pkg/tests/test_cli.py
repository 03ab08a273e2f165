import json
import subprocess
import sys

import pytest

from zassenhaus.cli import run


def run_json(capsys, *argv):
    code = run(list(argv) + ["--no-envelope"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_sl2_relation_passes(capsys):
    code, doc = run_json(capsys, "sl2-relation", "--p", "5")
    assert code == 0 == doc["exit_code"]
    assert doc["schema"] == 1 and doc["command"] == "sl2-relation"
    assert [r["status"] for r in doc["results"]] == ["pass"]
    assert doc["results"][0]["anchors"]


def test_hypotheses_fail_exit_one(capsys):
    code, doc = run_json(capsys, "hypotheses", "--algebra", "sl2", "--p", "2")
    assert code == 1
    assert doc["results"][0]["status"] == "fail"


def test_enumerate_q3_counts(capsys):
    code, doc = run_json(capsys, "enumerate", "--algebra", "sl2", "--p", "3", "--q", "3", "--mode", "O")
    assert code == 0
    assert doc["results"][0]["dims"]["O"] == 6


def test_enumerate_both_modes_with_points(tmp_path, capsys):
    pts = tmp_path / "points.jsonl"
    code, doc = run_json(capsys, "enumerate", "--algebra", "gl2", "--p", "2", "--q", "4", "--mode", "both",
                         "--points-out", str(pts))
    assert code == 0
    dims = doc["results"][0]["dims"]
    assert dims["O"] == dims["Zrss"] == 128
    lines = pts.read_text().splitlines()
    assert len(lines) == 128
    first = json.loads(lines[0])
    assert set(first) == {"chi", "lambda", "invariants", "witness_w"}


def test_zpoint_check(capsys):
    code, doc = run_json(capsys, "zpoint-check", "--p", "3", "--q", "9", "--chi", "h=1", "--lam", "x")
    assert code == 1
    code, doc = run_json(capsys, "zpoint-check", "--p", "3", "--q", "9", "--chi", "h=0", "--lam", "2")
    assert code == 0


def test_config_errors_exit_two(capsys):
    assert run(["center-basis", "--p", "4"]) == 2
    assert run(["center-basis", "--p", "3", "--degree", "20"]) == 2
    assert run(["enumerate", "--algebra", "gl3", "--p", "2", "--q", "8", "--mode", "O"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["suite", "--bogus-flag"]) == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_out_file_and_summary(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["veldkamp", "--p", "3", "--degree", "3", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(l.startswith("[PASS]") for l in lines)
    doc = json.loads(out.read_text())
    assert "created" in doc["envelope"]


def test_determinism(capsys):
    argv = ["factor-eta-f0", "--algebra", "sl2", "--p", "3", "--no-envelope"]
    run(argv)
    a = capsys.readouterr().out
    run(argv)
    b = capsys.readouterr().out
    assert a == b


def test_worker_count_does_not_change_output(capsys):
    base = ["enumerate", "--algebra", "sl2", "--p", "3", "--q", "9", "--mode", "O", "--no-envelope"]
    run(base + ["--workers", "1"])
    one = json.loads(capsys.readouterr().out)
    run(base + ["--workers", "2"])
    two = json.loads(capsys.readouterr().out)
    assert one["results"] == two["results"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "zassenhaus", "hypotheses", "--algebra", "gl2", "--p", "2",
                          "--no-envelope"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["results"][0]["status"] == "pass"


@pytest.mark.parametrize("cmd", ["center-basis", "hc-identities", "jordan", "param-check", "baby-verma"])
def test_other_commands_pass(cmd, capsys):
    extra = {"param-check": ["--q", "9", "--samples", "10"], "baby-verma": ["--q", "9"]}.get(cmd, [])
    code, doc = run_json(capsys, cmd, "--p", "3", "--degree", "3", *extra)
    assert code == 0, doc
