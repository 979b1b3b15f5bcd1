import json
import subprocess
import sys

import pytest

from superalg.cli import MIN_WINDOW, main, run_command

MUTATED_VIRASORO = """algebra bad-virasoro {
  params: ;
  generator L even;
  generator c even central;
  bracket L(i) L(j) -> (i-j) * L(i+j) + (i^2/12) * c(0) when i+j=0;
}
"""

POLE_MODULE = """module dens over witt {
  params: a;
  basis x even;
  action L(i) x(j) -> (1/(a-j)) * x(i+j);
}
"""


def run(*argv):
    res = run_command(list(argv))
    return res.code, (json.loads(res.payload()) if res.report and res.fmt == "json" else res)


@pytest.fixture
def sag(tmp_path):
    def write(text, name="defs.sag"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def test_check_jacobi_pass():
    code, rep = run("check-jacobi", "-A", "ramond-n2", "--window", "3", "--format", "json")
    assert code == 0
    assert rep["status"] == "pass" and rep["violations"] == []
    assert set(rep) == {"command", "inputs", "status", "window", "violations", "solutions", "closed_forms", "version"}


def test_mutated_algebra_exits_one(sag):
    code, rep = run("check-jacobi", "-A", sag(MUTATED_VIRASORO), "--window", "3", "--format", "json")
    assert code == 1
    assert rep["status"] == "fail"
    assert rep["violations"] and all(len(v["witness"]) == 3 for v in rep["violations"])


@pytest.mark.parametrize(
    "argv",
    [
        ["check-module", "-M", "RA_ab", "--window", "0"],
        ["check-module", "-M", "RA_ab", "--window", "1"],
        ["check-jacobi", "-A", "no-such-algebra"],
        ["check-jacobi"],
        ["check-jacobi", "-A", "witt", "--set", "zzz=1"],
        ["check-jacobi", "-A", "witt", "--set", "zzz"],
        ["no-such-command"],
        ["derive-deformation", "--family", "RC-x0"],
    ],
)
def test_usage_errors_exit_two(argv):
    res = run_command(argv)
    assert res.code == 2 and res.report is None and res.error


def test_bad_file_exits_two(sag):
    res = run_command(["check-jacobi", "-A", sag("algebra x @")])
    assert res.code == 2 and "1:11" in res.error


def test_pole_exits_two(sag):
    res = run_command(["check-module", "-M", sag(POLE_MODULE), "--set", "a=0", "--window", "2"])
    assert res.code == 2 and res.error.startswith("pole:")


def test_minimum_windows_enforced():
    for cmd, w in MIN_WINDOW.items():
        extra = ["--family", "RA-x0"] if cmd == "derive-deformation" else []
        res = run_command([cmd, "--window", str(w - 1), *extra])
        assert res.code == 2 and "at least" in res.error


def test_json_is_byte_identical_across_runs():
    argv = ["solve-cocycles", "-A", "witt", "--window", "4", "--format", "json"]
    assert run_command(argv).payload() == run_command(argv).payload()


def test_out_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["branch-bprime", "--b", "0", "--format", "json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["solutions"] == ["1/2", "-1/2", "-3/2"]


def test_text_format_reports_status(capsys):
    assert main(["check-jacobi", "-A", "witt", "--window", "2"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("check-jacobi: pass\n") and "violations: 0" in text


def test_error_goes_to_stderr(capsys):
    assert main(["check-module", "-M", "RA_ab", "--window", "0"]) == 2
    err = capsys.readouterr()
    assert err.out == "" and err.err.startswith("superalg: error:")


def test_witt_cocycle_closed_form():
    code, rep = run("solve-cocycles", "-A", "witt", "--window", "6", "--format", "json")
    assert code == 0
    assert rep["closed_forms"] == {"L,L": "(i^3-i)/6"}


def test_find_submodules_codimension_one():
    code, rep = run("find-submodules", "-M", "RA_ab", "--set", "a=0", "--set", "b=-1", "--format", "json")
    assert code == 0
    (sub,) = rep["solutions"]["submodules"]
    assert sub["codimension_in_band"] == 1
    assert sub["description"] == {"x": "all except [0]", "y": "all"}


def test_quotient_pass_and_fail():
    base = ["quotient", "-M", "RA_ab", "--set", "a=0", "--set", "b=-1", "--format", "json"]
    code, rep = run(*base, "--remove", "x:j!=0", "--remove", "y:true")
    assert code == 0 and rep["solutions"]["invariant"]
    code, rep = run(*base, "--remove", "x:j=0")
    assert code == 1 and rep["violations"]


def test_isomorphism_inline_bindings():
    code, rep = run("check-isomorphism", "-M", "RA_ab:a=1/3,b=1/4", "-M", "RAp_ab:a=1/3,b=3/4", "--format", "json")
    assert code == 0
    code, _ = run("check-isomorphism", "-M", "RA_ab:a=1/3,b=1/4", "-M", "RB_ab:a=1/3,b=1/4", "--format", "json")
    assert code == 1


def test_parse_command_canonicalizes(sag):
    path = sag(MUTATED_VIRASORO)
    code, rep = run("parse", path, "--format", "json")
    assert code == 0
    assert rep["solutions"]["definitions"] == [{"kind": "algebra", "name": "bad-virasoro"}]
    assert "\n".join(rep["solutions"]["canonical"]) + "\n" == MUTATED_VIRASORO


def test_python_dash_m_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "superalg", "branch-bprime", "--b", "0", "--format", "json"],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["solutions"] == ["1/2", "-1/2", "-3/2"]
