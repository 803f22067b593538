import csv
import io
import json
import re

import pytest

from tforge import cli
from tforge.gfp_linalg import load_matrix

Z4_TABLE = "4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n"


def run_cli(capsys, *args):
    rc = cli.main(list(args))
    out = capsys.readouterr().out
    return rc, out


def envelope(out):
    env = json.loads(out)
    assert set(env) >= {"command", "config", "result", "duration_ms", "pass"}
    return env


def test_scheme_ea2_json(capsys):
    rc, out = run_cli(capsys, "scheme", "--group", "ea2:2")
    env = envelope(out)
    assert rc == 0 and env["pass"]
    assert env["result"]["valencies"] == [1, 3, 3, 3, 6]
    assert env["result"]["tensor_matches_closed_form"]


def test_scheme_ea2_m3_valencies(capsys):
    rc, out = run_cli(capsys, "scheme", "--group", "ea2:3")
    env = envelope(out)
    assert rc == 0 and env["result"]["valencies"] == [1, 7, 7, 7, 42]


def test_scheme_table_file(tmp_path, capsys):
    path = tmp_path / "z4.txt"
    path.write_text(Z4_TABLE)
    rc, out = run_cli(capsys, "scheme", "--group", f"table:{path}",
                      "--check-axioms", "full")
    env = envelope(out)
    assert rc == 0 and env["pass"]


def test_algebra_json_dims(capsys):
    rc, out = run_cli(capsys, "algebra", "--p", "3", "--n", "4")
    env = envelope(out)
    assert rc == 0
    res = env["result"]
    assert res["dim_T"] == 51 and res["dim_T0"] == 50
    assert res["corner_dims"] == [1, 2, 2, 2, 6]
    assert res["basis_ok"] is True


def test_algebra_dump_roundtrips(tmp_path, capsys):
    rc, out = run_cli(capsys, "algebra", "--p", "2", "--n", "4",
                      "--dump", str(tmp_path / "mats"))
    assert rc == 0
    for name in ("A0", "A4", "E0", "E4"):
        with open(tmp_path / "mats" / f"{name}.txt") as fh:
            m = load_matrix(fh)
        assert m.shape == (16, 16) and m.modulus.p == 2


def test_verify_command_all_suites(capsys):
    rc, out = run_cli(capsys, "verify", "--p", "2", "--n", "4")
    env = envelope(out)
    assert rc == 0 and env["pass"]
    assert env["result"]["identities"]["counts"]["fail"] == 0
    assert env["result"]["predicates"]["counts"]["fail"] == 0


def test_verify_filter_and_suite_flags(capsys):
    rc, out = run_cli(capsys, "verify", "--p", "3", "--n", "4",
                      "--suite", "identities", "--filter", "Eq.")
    env = envelope(out)
    assert rc == 0
    ids = [r["id"] for r in env["result"]["identities"]["results"]]
    assert ids == ["Eq.1", "Eq.2", "Eq.3", "Eq.4"]
    assert "predicates" not in env["result"]


def test_decompose_command(capsys):
    rc, out = run_cli(capsys, "decompose", "--p", "2", "--n", "4")
    env = envelope(out)
    assert rc == 0 and env["pass"]
    assert env["result"]["blocks"] == [5, 4, 1]
    assert env["result"]["certificate"] == {
        "ideal": True, "nilpotent": True, "units": True, "dims": True}


def test_decompose_corner_flag(capsys):
    rc, out = run_cli(capsys, "decompose", "--p", "5", "--n", "4", "--corner", "4")
    env = envelope(out)
    assert rc == 0
    assert env["result"]["corner"]["blocks"] == [2, 1, 1]


def test_semisimple_table(capsys):
    rc, out = run_cli(capsys, "semisimple", "--p", "5", "--nmax", "32",
                      "--emit", "json")
    env = envelope(out)
    rows = {r["n"]: r for r in env["result"]["rows"]}
    assert rows[4]["semisimple"] and rows[8]["semisimple"]
    assert not rows[16]["semisimple"] and not rows[32]["semisimple"]
    assert rows[16]["case"] == "I" and rows[32]["case"] == "II"


def test_sweep_csv(tmp_path, capsys):
    out_file = tmp_path / "rows.csv"
    rc, out = run_cli(capsys, "sweep", "--pset", "2,5", "--nset", "4",
                      "--out", str(out_file))
    assert rc == 0
    rows = list(csv.DictReader(out_file.open()))
    assert [(r["p"], r["n"], r["case"]) for r in rows] == [
        ("2", "4", "P2"), ("5", "4", "III")]
    assert json.loads(rows[0]["blocks"]) == [5, 4, 1]
    assert rows[1]["semisimple"] == "True"


def test_sweep_json_envelope(capsys):
    rc, out = run_cli(capsys, "sweep", "--pset", "3", "--nset", "4",
                      "--format", "json")
    env = envelope(out)
    assert rc == 0
    row = env["result"]["rows"][0]
    assert row["case"] == "I" and row["dim_rad"] == 33 and row["pass"]


def test_json_determinism_modulo_duration(capsys):
    _, out1 = run_cli(capsys, "verify", "--p", "3", "--n", "4")
    _, out2 = run_cli(capsys, "verify", "--p", "3", "--n", "4")
    strip = lambda s: re.sub(r'"duration_ms": \d+', '"duration_ms": 0', s)
    assert strip(out1) == strip(out2)


def test_error_envelope_bad_n(capsys):
    rc, out = run_cli(capsys, "algebra", "--p", "3", "--n", "6")
    env = json.loads(out)
    assert rc == 2 and env["pass"] is False
    assert env["error"]["stage"] == "UnsupportedCaseError"


def test_error_envelope_bad_group(capsys):
    rc, out = run_cli(capsys, "scheme", "--group", "dihedral:4")
    env = json.loads(out)
    assert rc == 2 and env["error"]["stage"] == "SchemeError"


def test_error_envelope_closure_gate(capsys):
    rc, out = run_cli(capsys, "algebra", "--p", "2", "--n", "32")
    env = json.loads(out)
    assert rc == 2 and "allow_large" in env["error"]["message"]


def test_text_emit_renders_lines(capsys):
    rc, out = run_cli(capsys, "decompose", "--p", "3", "--n", "4",
                      "--emit", "text")
    assert rc == 0
    assert "case I" in out and "pass: True" in out
