import json
import os
import shutil
import subprocess
import sys

import pytest

from knotfloer.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_report_human(capsys):
    code, out, _ = run_cli(
        ["report", "--expr", "T(2,3)", "--v", "0..2", "--y", "0..1"], capsys
    )
    assert code == 0
    assert "tau = 1" in out
    assert "0:1 1:0" in out


def test_report_json_deterministic(capsys):
    args = ["report", "--expr", "T(2,3)#-T(2,3)", "--format", "json"]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["invariants"]["tau"] == 0
    assert payload["invariants"]["V"]["0"] == 0
    assert payload["bounds"]["genus"]["max"] == 0
    assert payload["bounds"]["clasp"]["max"] == 0


def test_report_parallel_matches_serial(capsys):
    base = ["report", "--expr", "T(2,3)#T(2,5)", "--format", "json"]
    _, serial, _ = run_cli(base, capsys)
    _, parallel, _ = run_cli(base + ["--jobs", "3"], capsys)
    assert serial == parallel


def test_report_json_like_alias(capsys):
    code, out, _ = run_cli(
        ["report", "--expr", "T(2,3)", "--format", "json-like"], capsys
    )
    assert code == 0
    json.loads(out)


def test_report_csv(capsys):
    code, out, _ = run_cli(["report", "--expr", "T(2,3)", "--format", "csv"], capsys)
    assert code == 0
    assert "invariants.tau,1" in out.splitlines()


def test_report_file_input(tmp_path, capsys):
    target = tmp_path / "hw.cfk"
    shutil.copy(os.path.join(DATA, "hw.cfk"), target)
    code, out, _ = run_cli(
        ["report", "--expr", f"@{target}", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    inv = payload["invariants"]
    assert (inv["tau"], inv["nu"], inv["omega"], inv["V"]["0"]) == (2, 2, 3, 2)
    assert payload["upsilon"] is None and payload["signature"] is None


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli(["report", "--expr", "T(2,2)"], capsys)
    assert code == 2
    assert "syntax error" in err


def test_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfk"
    bad.write_text(
        json.dumps(
            {
                "generators": [{"id": "a", "grw": 1, "grz": 0}],
                "differential": [],
            }
        )
    )
    code, _, err = run_cli(["report", "--expr", f"@{bad}"], capsys)
    assert code == 3
    assert "invalid input" in err


def test_involutive_on_requires_iota(tmp_path, capsys):
    target = tmp_path / "hw.cfk"
    shutil.copy(os.path.join(DATA, "hw.cfk"), target)
    code, _, err = run_cli(
        ["report", "--expr", f"@{target}", "--involutive", "on"], capsys
    )
    assert code == 3


def test_plotdata_family_knot(capsys):
    code, out, _ = run_cli(["plotdata", "--expr", "T(2,11)#-T(4,5)"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert "1\t-1" in lines
    # first table segment has slope 1: row at the first breakpoint 0.5
    assert "0.5\t0.5" in lines
    # ratio table starts at the initial slope
    ratio_start = lines.index("# t\tupsilon_over_t") + 1
    assert lines[ratio_start] == "0\t1"


def test_plotdata_rejects_non_torus(capsys):
    code, _, err = run_cli(["plotdata", "--expr", "HW"], capsys)
    assert code == 5


def test_plotdata_locally_trivial_sum_is_zero(capsys):
    code, out, _ = run_cli(["plotdata", "--expr", "T(2,3)#-T(2,3)"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    half = len(lines) // 2
    assert lines[:half] == ["0\t0", "1\t0"]


def test_certificates_block(capsys):
    code, out, _ = run_cli(["report", "--expr", "T(2,3)", "--format", "json"], capsys)
    assert code == 0
    cert = json.loads(out)["certificates"]["v0_tower_cycle"]
    assert isinstance(cert, list) and cert
    assert set(cert[0]) == {"gen", "u", "v"}
    # the certified cycle really is the level-0 tower representative: each
    # monomial has Alexander level 0
    from knotfloer.builders import torus_knot_complex

    trefoil = torus_knot_complex(2, 3)
    for term in cert:
        g = trefoil.gen(term["gen"])
        assert g.alexander - term["u"] + term["v"] == 0


def test_cap_overflow_is_internal_error(capsys):
    code, _, err = run_cli(["report", "--expr", "T(2,3)", "--cap", "0"], capsys)
    assert code == 4
    assert "internal consistency" in err


def test_file_iota_drives_involutive_report(tmp_path, capsys):
    from knotfloer.expressions import parse_knot_expr
    from knotfloer.fileio import save_complex
    from knotfloer.involutive import realize_with_iota

    granny, iota = realize_with_iota(parse_knot_expr("T(2,3)#T(2,3)"))
    path = tmp_path / "granny.cfk"
    save_complex(granny, str(path), name="granny", iota=iota)
    code, out, _ = run_cli(
        ["report", "--expr", f"@{path}", "--involutive", "on", "--format", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["involutive"] == {"v0_bar": 1, "v0_under": 2}


def test_validate_ok(tmp_path, capsys):
    target = tmp_path / "hw.cfk"
    shutil.copy(os.path.join(DATA, "hw.cfk"), target)
    code, out, _ = run_cli(["validate", "--expr", f"@{target}"], capsys)
    assert code == 0
    assert "ok" in out


def test_validate_rejects_bad_gradings(tmp_path, capsys):
    bad = tmp_path / "bad.cfk"
    bad.write_text(
        json.dumps(
            {
                "generators": [{"id": "a", "grw": 1, "grz": 0}],
                "differential": [],
            }
        )
    )
    code, _, err = run_cli(["validate", "--expr", f"@{bad}"], capsys)
    assert code == 3


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "knotfloer.cli", "report", "--expr", "T(2,3)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "tau = 1" in proc.stdout
