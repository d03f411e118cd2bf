import json
import subprocess
import sys

import pytest

from semimat.cli import main

UNITS_Q = """\
# full matrix-unit family over the rationals
field Q

matrix
0 1
0 0

matrix
0 0
1 0
"""

GF4_COPY = """\
field GF(2)
matrix
0 1
1 1
"""

DESCENT_GOOD = """\
field GF(4)
subfield GF(2)
matrix
t+1 1
t t+1
matrix
1 0
1 1
"""

DESCENT_BAD = """\
field GF(2^2)
subfield GF(2)
matrix
t 0
0 1
matrix
0 1
1 0
"""

TRIANGULAR = """\
field GF(5)
matrix
1 1
0 2
matrix
3 0
0 3
"""

QUAT = """\
field H
matrix
i j
-j i
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(args, capsys):
    code = main(args)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# ---------------------------------------------------------------------------
# exit codes per flow
# ---------------------------------------------------------------------------

def test_burnside_verified_exit_zero(tmp_path, capsys):
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    code, out, _ = _run(["burnside-check", fam], capsys)
    assert code == 0
    assert "theorem_instance_verified" in out


def test_burnside_hypothesis_fails_exit_two(tmp_path, capsys):
    fam = _write(tmp_path, "gf4.fam", GF4_COPY)
    code, out, _ = _run(["burnside-check", fam], capsys)
    assert code == 2
    assert "hypothesis_fails" in out


def test_descent_verified_exit_zero(tmp_path, capsys):
    fam = _write(tmp_path, "descent.fam", DESCENT_GOOD)
    code, out, _ = _run(["descent-check", fam], capsys)
    assert code == 0
    assert "theorem_instance_verified" in out


def test_descent_bad_spectra_exit_two(tmp_path, capsys):
    fam = _write(tmp_path, "bad.fam", DESCENT_BAD)
    code, out, _ = _run(["descent-check", fam], capsys)
    assert code == 2


def test_descent_requires_subfield_directive(tmp_path, capsys):
    fam = _write(tmp_path, "nosub.fam", GF4_COPY)
    code, _, err = _run(["descent-check", fam], capsys)
    assert code == 4
    assert "subfield" in err


def test_triangularize_success(tmp_path, capsys):
    fam = _write(tmp_path, "tri.fam", TRIANGULAR)
    code, out, _ = _run(["triangularize", fam, "--emit", "machine"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["triangularizable"] is True
    assert "P" in payload


def test_triangularize_obstruction_exit_two(tmp_path, capsys):
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    code, out, _ = _run(["triangularize", fam, "--emit", "machine"], capsys)
    assert code == 2
    payload = json.loads(out)
    assert payload["triangularizable"] is False
    assert payload["obstruction"]["kind"] == "no_common_eigenvector"


def test_chop_full_series(tmp_path, capsys):
    fam = _write(tmp_path, "tri.fam", TRIANGULAR)
    code, out, _ = _run(["chop", fam, "--emit", "machine"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dims"] == [0, 1, 2]


def test_chop_incomplete_exit_three(tmp_path, capsys):
    quat_form = """\
field Q
matrix
0 -1 0 0
1 0 0 0
0 0 0 -1
0 0 1 0
matrix
0 0 -1 0
0 0 0 1
1 0 0 0
0 -1 0 0
"""
    fam = _write(tmp_path, "quatform.fam", quat_form)
    code, out, _ = _run(["chop", fam, "--emit", "machine"], capsys)
    assert code == 3
    payload = json.loads(out)
    assert payload["complete"] is False


def test_analyze_runs_everything(tmp_path, capsys):
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    code, out, _ = _run(["analyze", fam, "--emit", "machine"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["algebra_dim"] == 4
    assert payload["division_degree"] == 1


def test_quat_decompose(tmp_path, capsys):
    fam = _write(tmp_path, "q.fam", QUAT)
    code, out, _ = _run(["quat-decompose", fam, "--emit", "machine"],
                        capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["decompositions"][0]["scalar"] == "0"
    assert len(payload["decompositions"][0]["terms"]) == 1


def test_quat_command_rejects_field_families(tmp_path, capsys):
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    code, _, err = _run(["quat-decompose", fam], capsys)
    assert code == 4


def test_field_commands_reject_quaternion_families(tmp_path, capsys):
    fam = _write(tmp_path, "q.fam", QUAT)
    code, _, err = _run(["burnside-check", fam], capsys)
    assert code == 4


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_error_reports_location(tmp_path, capsys):
    bad = "field GF(5)\nmatrix\n1 2\n3 oops\n"
    fam = _write(tmp_path, "bad.fam", bad)
    code, _, err = _run(["analyze", fam], capsys)
    assert code == 4
    assert "line 4" in err
    assert "oops" in err


def test_parse_error_on_ragged_matrix(tmp_path, capsys):
    bad = "field GF(3)\nmatrix\n1 2\n1\n"
    fam = _write(tmp_path, "ragged.fam", bad)
    code, _, err = _run(["analyze", fam], capsys)
    assert code == 4


def test_parse_error_on_missing_file(capsys):
    code, _, err = _run(["analyze", "/nonexistent/x.fam"], capsys)
    assert code == 4


def test_usage_error_without_command(capsys):
    assert _run([], capsys)[0] == 4
    assert _run(["no-such-command", "x"], capsys)[0] == 4


def test_comments_and_blank_lines_ignored(tmp_path, capsys):
    text = ("# header comment\n\nfield GF(5)  # trailing\n\n"
            "matrix\n1 1  # row comment\n0 2\n")
    fam = _write(tmp_path, "c.fam", text)
    code, _, _ = _run(["triangularize", fam], capsys)
    assert code == 0


# ---------------------------------------------------------------------------
# machine output determinism and re-verification
# ---------------------------------------------------------------------------

def test_machine_output_byte_identical(tmp_path, capsys):
    fam = _write(tmp_path, "descent.fam", DESCENT_GOOD)
    _, out1, _ = _run(["descent-check", fam, "--emit", "machine"], capsys)
    _, out2, _ = _run(["descent-check", fam, "--emit", "machine"], capsys)
    assert out1 == out2
    assert out1.endswith("\n")
    json.loads(out1)


def test_machine_report_reverifies(tmp_path, capsys):
    from semimat.burnside import reverify_report
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    _, out, _ = _run(["burnside-check", fam, "--emit", "machine"], capsys)
    assert reverify_report(json.loads(out))


def test_console_entry_point_subprocess(tmp_path):
    fam = _write(tmp_path, "units.fam", UNITS_Q)
    proc = subprocess.run(
        [sys.executable, "-m", "semimat.cli", "burnside-check", str(fam)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "theorem_instance_verified" in proc.stdout
