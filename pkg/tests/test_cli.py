import json
import subprocess
import sys
from pathlib import Path

import pytest

from meroshift.cli import main, parse_operator_spec
from meroshift.serialize import dumps

ROOT = Path(__file__).resolve().parents[1]
REC = ROOT / "recurrences"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_eigen_note_b(capsys):
    code, out, _ = run(capsys, "solve-eigen", "--op", "delta:c=1,n=1", "--A", "1")
    assert code == 0
    assert "(2)^(z/c)*pi(z)" in out and "PASS" in out


def test_solve_eigen_generic_roots(capsys):
    code, out, _ = run(capsys, "solve-eigen", "--coeffs", "2,-3,1", "--A", "0", "--generic", "--json")
    assert code == 0
    d = json.loads(out)
    assert [r["root"] for r in d["solution"]["roots"]] == ["1", "2"]
    assert len(d["solution"]["terms"]) == 2


def test_solve_eigen_double_root(capsys):
    code, out, _ = run(capsys, "solve-eigen", "--coeffs", "4,-4,1", "--A", "0", "--generic", "--json")
    d = json.loads(out)
    assert code == 0
    assert [(t["root"], t["mult_index"]) for t in d["solution"]["terms"]] == [("2", 0), ("2", 1)]


def test_generic_flag_required(capsys):
    code, _, err = run(capsys, "solve-eigen", "--coeffs", "2,-3,1", "--A", "0")
    assert code == 1 and "generic" in err


@pytest.mark.parametrize(
    "f, rec, extra",
    [
        ("tan(pi*z)", "tan_homogeneous.json", []),
        ("tan(pi*z)+z", "tan_inhomogeneous.json", []),
        ("gamma(z)", "gamma.json", ["--box", "1,6,-3,3", "--tol", "1e-8"]),
    ],
)
def test_residual_passes(capsys, f, rec, extra):
    code, out, _ = run(capsys, "residual", "--f", f, "--recurrence", str(REC / rec), *extra)
    assert code == 0, out


@pytest.mark.parametrize(
    "f, rec",
    [("exp(z)", "claimed_exp.json"), ("exp(z)+1", "claimed_exp_plus_one.json"), ("exp((z^2-1)/2)", "claimed_gaussian.json")],
)
def test_residual_flags_discrepancies(capsys, f, rec):
    code, out, _ = run(capsys, "residual", "--f", f, "--recurrence", str(REC / rec), "--json")
    assert code == 2
    assert json.loads(out)["residual"]["max_rel"] > 0.1


def test_residual_against_operator(capsys):
    code, _, _ = run(capsys, "residual", "--f", "exp(z*log(2))", "--op", "delta:c=1,n=1", "--A", "1", "--quiet")
    assert code == 0


def test_nevanlinna_exp(capsys, tmp_path):
    csv = tmp_path / "t.csv"
    code, out, _ = run(capsys, "nevanlinna", "--f", "exp(z)", "--rmax", "100", "--json", "--csv", str(csv))
    assert code == 0
    assert abs(json.loads(out)["report"]["order"] - 1) < 0.1
    assert csv.read_text().startswith("r,m,N,T")


def test_share(capsys):
    code, out, _ = run(capsys, "share", "--f", "sin(z)", "--g", "2*sin(z)", "--a", "0", "--r", "10", "--table")
    assert code == 0 and "CM true" in out
    code, _, _ = run(capsys, "share", "--f", "sin(z)", "--g", "sin(z)^2", "--expect", "cm", "--quiet")
    assert code == 2


def test_rational_file(capsys):
    code, out, _ = run(capsys, "rational", "--file", str(REC / "shifted_quadratic.json"), "--json")
    assert code == 0
    d = json.loads(out)
    assert d["particular"]["text"] == "z/(z + 1)"
    assert d["verified"] and d["certificates"][0]["residual"] == []


def test_roots_sorted(capsys):
    code, out, _ = run(capsys, "roots", "--coeffs=-1,0,0,0,1", "--json")
    d = json.loads(out)
    assert code == 0
    assert [r["root"] for r in d["roots"]] == ["1", "1i", "-1", "-1i"]


@pytest.mark.parametrize(
    "argv",
    [
        ["residual", "--f", "sin(", "--op", "delta:c=1,n=1"],
        ["solve-eigen", "--op", "wobble:1"],
        ["solve-eigen"],
        ["frobnicate"],
        ["rational", "--file", "/nonexistent.json"],
        ["nevanlinna", "--f", "z", "--rmin", "10", "--rmax", "5"],
        ["share", "--f", "z", "--g", "z", "--tol", "-1"],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    assert main(argv) == 1


def test_json_round_trip_is_byte_identical(capsys):
    for argv in (
        ["rational", "--file", str(REC / "shifted_quadratic.json"), "--json"],
        ["solve-eigen", "--op", "delta:c=1,n=2", "--A", "1", "--json"],
        ["share", "--f", "sin(z)", "--g", "2*sin(z)", "--json"],
    ):
        _, out, _ = run(capsys, *argv)
        assert dumps(json.loads(out)) + "\n" == out


def test_config_file_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"op": "delta:c=1,n=1", "A": "1", "json": True}))
    code, out, _ = run(capsys, "solve-eigen", "--config", str(cfg))
    assert code == 0 and json.loads(out)["passed"] is True


def test_seed_changes_samples_deterministically(capsys):
    argv = ["residual", "--f", "exp(z*log(2))", "--op", "delta:c=1,n=1", "--json", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_operator_string_parsing():
    op = parse_operator_spec("coeffs:2,-3,1;c=1+i")
    assert op.shift == 1 + 1j and op.coeffs == (2, -3, 1)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "meroshift", "roots", "--coeffs", "2,-3,1"], capture_output=True, text=True, cwd=ROOT
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["1  (multiplicity 1)", "2  (multiplicity 1)"]
