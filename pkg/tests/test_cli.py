import json
import subprocess
import sys
from pathlib import Path

import pytest

from nkoszul.cli import main
from nkoszul.linalg import GF, QQ
from nkoszul.textio import ParseError, parse_presentation, same_presentation, serialize

INPUTS = Path(__file__).resolve().parents[1] / "demos" / "inputs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# textio ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(p.name for p in INPUTS.glob("*.txt")))
def test_round_trip(name):
    p = parse_presentation((INPUTS / name).read_text())
    text = serialize(p)
    q = parse_presentation(text)
    assert same_presentation(p, q)
    assert serialize(q) == text


def test_field_section_and_override():
    text = (INPUTS / "f2_witness.txt").read_text()
    assert parse_presentation(text).field == GF(2)
    assert parse_presentation(text, QQ).field == QQ


@pytest.mark.parametrize("text, where, msg", [
    ("[operad]\ngen m2 2 0\nrel m2.3(m2)\n", "line 3, column 8", "slot 3 out of range: arity is 2"),
    ("[operad]\ngen m2 2 0\nrel m2.1(m9)\n", "line 3", "m9"),
    ("gen m2 2 0\n", "line 1", "content before the first section"),
    ("[operad]\n[operad]\n", "line 2", "duplicate section"),
    ("[wat]\n", "line 1", "unknown section"),
    ("[nhomog]\nn = 3\ngenerators = x\nrel x*x\n", "line 4", ""),
])
def test_parse_errors_have_positions(text, where, msg):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert str(exc.value).startswith(where)
    assert msg in str(exc.value)


# commands ------------------------------------------------------------------------

def test_gb_assoc(capsys):
    code, rep = report(capsys, "gb", INPUTS / "assoc.txt", "--max-arity", 6)
    assert code == 0
    assert set(rep) == {"command", "input_sha256", "bounds", "result", "verdict"}
    assert rep["command"] == "gb" and rep["verdict"] is True
    assert rep["result"]["size"] == 1
    assert rep["bounds"]["max_arity"] == 6


def test_reports_are_byte_identical(capsys):
    outs = [run(capsys, "nkoszul", INPUTS / "x3.txt", "--max-weight", 7)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    other = run(capsys, "nkoszul", INPUTS / "x3.txt", "--max-weight", 7, "--field", "f3")[1]
    assert json.loads(other)["input_sha256"] != json.loads(outs[0])["input_sha256"]


def test_normal_forms(capsys):
    code, rep = report(capsys, "normal-forms", INPUTS / "assoc.txt", "--max-arity", 5,
                       "--max-weight", 4, "--list")
    assert code == 0
    assert rep["result"]["counts_by_arity"] == {str(n): 1 for n in range(1, 6)}
    assert len(rep["result"]["monomials"]["4"]) == 1
    code, rep = report(capsys, "normal-forms", INPUTS / "empty_operad.txt", "--max-arity", 4,
                       "--max-weight", 3)
    # free on one binary operation: Catalan numbers
    assert rep["result"]["counts_by_arity"] == {"1": 1, "2": 1, "3": 2, "4": 5}


def test_algebra_commands(capsys):
    path = INPUTS / "cubic_ideal_algebra.txt"
    code, rep = report(capsys, "algebra-basis", path, "--max-weight", 6)
    assert code == 0
    assert rep["result"]["dims_by_weight"] == {"1": 2, "2": 0, "3": 8, "4": 16, "5": 0, "6": 64}
    code, rep = report(capsys, "algebra-gb", path, "--max-weight", 5)
    assert code == 0 and rep["result"]["size"] > 4


def test_dual(capsys):
    code, rep = report(capsys, "dual", INPUTS / "x3.txt", "--max-weight", 4)
    assert code == 0
    assert rep["result"]["dim_r"] == 1 and rep["result"]["dim_r_perp"] == 0
    assert rep["result"]["dims_a"] == [1, 1, 1, 0, 0]
    assert rep["result"]["dims_dual"] == [1, 1, 1, 1, 1]


def test_nkoszul_verdicts(capsys):
    code, rep = report(capsys, "nkoszul", INPUTS / "x3.txt", "--max-weight", 9)
    assert code == 0 and rep["result"]["verdict"] == "koszul-up-to-bound"
    assert rep["result"]["yoneda_match"] is True
    code, rep = report(capsys, "nkoszul", INPUTS / "f2_witness.txt", "--max-weight", 6)
    assert code == 1 and rep["verdict"] is False
    assert rep["result"]["witness"] == {"weight": 5, "degree": 2, "homology_dim": 1}
    assert rep["result"]["yoneda_mismatch_weights"] == [5]
    code, rep = report(capsys, "nkoszul", INPUTS / "free2.txt", "--max-weight", 6,
                       "--skip-yoneda")
    assert code == 0 and "yoneda_match" not in rep["result"]


def test_ext_dims(capsys):
    code, rep = report(capsys, "ext-dims", INPUTS / "x3.txt", "--max-weight", 4)
    assert code == 0
    assert rep["result"]["ext_dims"] == {"0": {"0": 1}, "1": {"1": 1}, "2": {}, "3": {"2": 1},
                                         "4": {"3": 1}}


def test_na2n_verify(capsys):
    code, rep = report(capsys, "na2n-verify", "--n", 3, "--max-arity", 8)
    assert code == 0
    assert rep["result"]["match"] is True and rep["result"]["size"] == 11


def test_kd_present(capsys):
    code, rep = report(capsys, "kd-present", INPUTS / "x3.txt", "--max-weight", 7)
    assert code == 0 and rep["result"]["ok"] is True


def test_pretty_and_timings(capsys):
    code, out, _ = run(capsys, "dual", INPUTS / "x3.txt", "--pretty", "--timings")
    assert code == 0
    assert "command: dual" in out and "timings.seconds:" in out


@pytest.mark.parametrize("argv", [
    ["gb", INPUTS / "assoc.txt"],
    ["nkoszul", INPUTS / "x3.txt"],
    ["nkoszul", INPUTS / "assoc.txt", "--max-weight", 3],
    ["gb", INPUTS / "x3.txt", "--max-arity", 3],
    ["gb", INPUTS / "nope.txt", "--max-arity", 3],
    ["dual", INPUTS / "x3.txt", "--field", "f4"],
])
def test_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith(f"nkoszul {argv[0]}: error:")


def test_parse_error_through_cli(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("[operad]\ngen m2 2 0\nrel m2.3(m2)\n")
    code, _, err = run(capsys, "gb", f, "--max-arity", 4)
    assert code == 2 and "line 3, column 8" in err


def test_stdin_and_console_entry():
    text = (INPUTS / "x3.txt").read_text()
    res = subprocess.run([sys.executable, "-m", "nkoszul.cli", "dual", "-"], input=text,
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["result"]["dim_r_perp"] == 0
