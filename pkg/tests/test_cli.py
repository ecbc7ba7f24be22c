import csv
import io
import json
import math

import pytest

from tzl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def test_admissible_check(capsys):
    code, out, _ = run(capsys, "admissible", "check", "--H", "0,2,4")
    assert code == 0
    (row,) = rows(out)
    assert row["status"] == "inadmissible" and row["witness_prime"] == "3"


def test_tuples_count_and_list(capsys):
    code, out, _ = run(capsys, "tuples", "count", "--H", "0,2", "--limit", "100")
    assert code == 0 and rows(out)[0]["count"] == "8"
    code, out, _ = run(capsys, "tuples", "list", "--H", "0,2,6", "--limit", "50")
    assert [r["p"] for r in rows(out)] == ["5", "11", "17", "41"]


def test_series_logzeta(capsys):
    code, out, _ = run(capsys, "series", "logzeta", "--k", "1", "--s", "2", "--N", "1000000")
    assert code == 0
    (row,) = rows(out)
    assert float(row["value"]) == pytest.approx(math.log(math.pi**2 / 6), abs=1e-5)
    assert list(row)[:7] == ["H", "s", "N", "m", "kind", "value", "err_bound"]


def test_provenance_header(capsys):
    _, out, _ = run(capsys, "series", "deriv", "--H", "0,2", "--s", "2", "--N", "10")
    header = [line for line in out.splitlines() if line.startswith("#")]
    assert any(line.startswith("# config_sha256: ") for line in header)
    assert "# sieve_limit: 12" in header


def test_json_lines(capsys):
    code, out, _ = run(capsys, "series", "remainder", "--H", "0,2", "--s-grid", "1.5,2",
                       "--N", "1000", "--json")
    lines = [json.loads(line) for line in out.splitlines()]
    assert "provenance" in lines[0]
    assert [r["s"] for r in lines[1:]] == [1.5, 2.0]
    assert all(r["bound_margin"] > 0 for r in lines[1:])


@pytest.mark.parametrize("argv,code", [
    (["bogus"], 64),
    (["series"], 64),
    (["series", "logzeta", "--k", "1", "--s", "1", "--N", "10"], 2),
    (["admissible", "check", "--H", "0,3"], 2),
    (["sieve", "build", "--limit", "1e12"], 3),
    (["admissible", "extend", "--H", "0,2,6,8,12", "--base", "4"], 2),
    (["lemma", "gcd", "--two-i", "2", "--two-j", "6", "--N", "100"], 2),
    (["tuples", "count", "--H", "0,2", "--limit", "100", "--sieve-limit", "50"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_force_flags(capsys):
    code, out, _ = run(capsys, "series", "logzeta", "--k", "1", "--s", "1", "--N", "10",
                       "--force-s")
    assert code == 0 and float(rows(out)[0]["value"]) > 0
    code, out, _ = run(capsys, "lemma", "gcd", "--two-i", "2", "--two-j", "6", "--N", "100",
                       "--force")
    assert code == 0 and int(rows(out)[0]["violations"]) > 0


def test_every_group_runs(capsys):
    commands = [
        ["sieve", "build", "--limit", "1000"],
        ["sieve", "stats", "--N-grid", "10,100,1000"],
        ["admissible", "extend", "--H", "0,2", "--base", "2"],
        ["admissible", "class", "--base", "2", "--bound", "64"],
        ["admissible", "class", "--h", "36"],
        ["series", "primeform", "--H", "0,2", "--s", "2", "--N", "100"],
        ["lemma", "two", "--two-i", "2", "--l", "2", "--s-grid", "1.5,2", "--N", "1000"],
        ["lemma", "three", "--two-j", "6", "--l", "2", "--s", "2", "--N", "1000"],
        ["lemma", "equiv", "--two-i", "2", "--l", "2", "--s-grid", "1.5,1.2", "--N", "1000"],
        ["growth", "euler", "--N-grid", "100,1000,10000"],
        ["growth", "diverge", "--H", "0,2", "--m", "1", "--N-grid", "100,1000,10000"],
        ["growth", "prop", "--two-j", "2", "--s-grid", "1.5,1.2", "--N", "1000"],
        ["growth", "ratio", "--H", "0,2", "--s-grid", "1.5,1.2", "--N", "1000"],
        ["growth", "twins", "--H", "0,2,6", "--limit", "50"],
        ["growth", "similar", "--two-j", "2", "--N-grid", "100,1000"],
        ["growth", "hypothesis", "--H", "0,2,6", "--N-grid", "100,1000"],
        ["manifest"],
    ]
    for argv in commands:
        code, out, err = run(capsys, *argv)
        assert code == 0, (argv, err)
        assert rows(out), argv


def test_class_output(capsys):
    _, out, _ = run(capsys, "admissible", "class", "--h", "36")
    row = rows(out)[0]
    assert row["root"] == "6" and row["members"] == "6 36"


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"s_grid": [1.5, 2.0], "N_grid": [100, 1000], "tuples": ["0,4"]}))
    _, out, _ = run(capsys, "series", "deriv", "--config", str(cfg))
    got = rows(out)
    assert len(got) == 4 and {r["H"] for r in got} == {"0,4"}
    _, out, _ = run(capsys, "series", "deriv", "--config", str(cfg), "--s", "3")
    assert {r["s"] for r in rows(out)} == {"3"}


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "tuples", "count", "--H", "0,2", "--limit", "100",
                       "--output", str(target))
    assert code == 0 and out == ""
    assert rows(target.read_text())[0]["count"] == "8"


def test_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TZL_CACHE_DIR", str(tmp_path))
    _, first, _ = run(capsys, "tuples", "count", "--H", "0,2", "--limit", "5000")
    files = list(tmp_path.glob("sieve-*.tzl"))
    assert len(files) == 1 and files[0].read_bytes()[:4] == b"TZL1"
    _, second, _ = run(capsys, "tuples", "count", "--H", "0,2", "--limit", "5000")
    assert first == second


def test_deterministic_across_threads(capsys):
    argv = ["series", "deriv", "--H", "0,2", "--s-grid", "1.5,1.1", "--N-grid", "1000,3000000"]
    outs = [run(capsys, *argv, "--threads", t)[1] for t in ("1", "1", "8")]
    assert outs[0] == outs[1] == outs[2]
