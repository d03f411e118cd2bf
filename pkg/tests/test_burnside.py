import json
import random

import pytest

from semimat.burnside import (
    SemigroupClosure,
    all_elements_triangularizable,
    check_burnside,
    check_spectra_descent,
    reverify_report,
)
from semimat.errors import EmptyInput, UnsupportedTower
from semimat.fields import GF, QQ
from semimat.linalg import Matrix, random_invertible


def _unit(field, n, i, j):
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return Matrix.from_rows(field, m)


def _gf4_copy_generators():
    # multiplicative generator of a GF(4) copy inside M_2(GF(2))
    return [Matrix.from_rows(GF(2), [[0, 1], [1, 1]])]


def _descent_generators():
    # generators of M_2(GF(2)) written with GF(4) entries after a
    # conjugation that keeps all spectra in the prime field
    f4 = GF(2, 2)
    return [Matrix.from_rows(f4, [["t+1", "1"], ["t", "t+1"]]),
            Matrix.from_rows(f4, [["1", "0"], ["1", "1"]])]


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------

def test_closure_matrix_units():
    f = QQ
    gens = [_unit(f, 2, 0, 1), _unit(f, 2, 1, 0)]
    clo = SemigroupClosure(gens)
    # products reach E11, E22 and the zero matrix
    assert len(clo.elements) == 5
    assert clo.complete
    assert clo.verify_closed()


def test_closure_cyclic_group():
    f = GF(5)
    g = Matrix.from_rows(f, [[2, 0], [0, 1]])  # order 4 scalar block
    clo = SemigroupClosure([g])
    assert len(clo.elements) == 4
    assert clo.complete


def test_closure_cap_truncates():
    f = QQ
    g = Matrix.from_rows(f, [[2]])  # infinite cyclic semigroup
    clo = SemigroupClosure([g], cap=10)
    assert not clo.complete
    assert len(clo.elements) == 10


def test_closure_empty_input():
    with pytest.raises(EmptyInput):
        SemigroupClosure([])


def test_closure_deterministic_order():
    f = GF(3)
    gens = [_unit(f, 2, 0, 1), _unit(f, 2, 1, 0)]
    a = SemigroupClosure(gens)
    b = SemigroupClosure(gens)
    assert [m.to_strings() for m in a.elements] == \
        [m.to_strings() for m in b.elements]


def test_scan_statuses():
    f = GF(3)
    tri = SemigroupClosure([Matrix.from_rows(f, [[1, 1], [0, 2]])])
    assert all_elements_triangularizable(tri).status == "holds"
    rot = SemigroupClosure([Matrix.from_rows(f, [[0, 2], [1, 0]])])
    scan = all_elements_triangularizable(rot)
    assert scan.status == "fails"
    assert scan.witness is not None
    assert scan.nonsplit_factor is not None
    unbounded = SemigroupClosure([Matrix.from_rows(QQ, [[2]])], cap=5)
    assert all_elements_triangularizable(unbounded).status in (
        "holds", "unverified")


# ---------------------------------------------------------------------------
# theorem instance checks
# ---------------------------------------------------------------------------

def test_burnside_verified_on_matrix_units():
    for field in (QQ, GF(3)):
        gens = [_unit(field, 2, 0, 1), _unit(field, 2, 1, 0)]
        report = check_burnside(gens)
        assert report.verdict == "theorem_instance_verified"
        assert report.data["algebra_dim"] == 4
        names = {h["name"]: h["status"] for h in report.hypotheses}
        assert names["elements_triangularizable"] == "holds"


def test_burnside_hypothesis_fails_on_gf4_copy():
    report = check_burnside(_gf4_copy_generators())
    assert report.verdict == "hypothesis_fails"
    names = {h["name"]: h["status"] for h in report.hypotheses}
    assert names["elements_triangularizable"] == "fails"


def test_burnside_verified_on_triangular_family():
    # reducible and algebra dimension below n^2: the biconditional holds
    f = GF(3)
    gens = [Matrix.from_rows(f, [[1, 1], [0, 1]]),
            Matrix.from_rows(f, [[2, 0], [0, 1]])]
    report = check_burnside(gens)
    assert report.verdict == "theorem_instance_verified"
    assert report.data["algebra_dim"] < 4


def test_burnside_incomplete_on_capped_closure():
    g = Matrix.from_rows(QQ, [[1, 1], [0, 1]])
    report = check_burnside([g], cap=3)
    assert report.verdict in ("theorem_instance_verified", "incomplete")


def test_descent_verified_on_conjugated_full_algebra():
    report = check_spectra_descent(_descent_generators(), GF(2))
    assert report.verdict == "theorem_instance_verified"
    names = {h["name"]: h["status"] for h in report.hypotheses}
    assert names["spectra_in_subfield"] == "holds"
    assert names["irreducible_over_field"] == "holds"
    concl = {c["name"]: c["status"] for c in report.conclusions}
    assert concl["subfield_algebra_full"] == "holds"
    assert concl["similarity_constructed"] == "holds"


def test_descent_hypothesis_fails_on_bad_spectra():
    f4 = GF(2, 2)
    gens = [Matrix.from_rows(f4, [["t", "0"], ["0", "1"]]),
            Matrix.from_rows(f4, [["0", "1"], ["1", "0"]])]
    report = check_spectra_descent(gens, GF(2))
    assert report.verdict == "hypothesis_fails"
    names = {h["name"]: h["status"] for h in report.hypotheses}
    assert names["spectra_in_subfield"] == "fails"


def test_descent_rejects_non_subfield():
    with pytest.raises(UnsupportedTower):
        check_spectra_descent(_descent_generators(), GF(3))


def test_descent_on_random_conjugates():
    rng = random.Random(11)
    f4 = GF(2, 2)
    base = [_unit(f4, 2, 0, 1), _unit(f4, 2, 1, 0),
            Matrix.identity(f4, 2)]
    hits = 0
    for trial in range(5):
        g = random_invertible(f4, 2, rng)
        ginv = g.inverse()
        gens = [ginv @ m @ g for m in base]
        report = check_spectra_descent(gens, GF(2), seed=trial)
        if report.verdict == "theorem_instance_verified":
            hits += 1
        else:
            # conjugation may push spectra outside the prime field;
            # that must be flagged as a hypothesis failure, never as a
            # counterexample
            assert report.verdict == "hypothesis_fails"
    assert hits >= 1


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def test_report_dict_is_json_stable():
    report = check_burnside(_gf4_copy_generators())
    d = report.to_dict()
    s1 = json.dumps(d, sort_keys=True)
    s2 = json.dumps(check_burnside(_gf4_copy_generators()).to_dict(),
                    sort_keys=True)
    assert s1 == s2
    assert d["kind"] == "burnside"
    assert d["verdict"] == "hypothesis_fails"


def test_reverify_burnside_roundtrip():
    report = check_burnside(_gf4_copy_generators())
    blob = json.loads(json.dumps(report.to_dict()))
    assert reverify_report(blob)


def test_reverify_descent_roundtrip():
    report = check_spectra_descent(_descent_generators(), GF(2))
    blob = json.loads(json.dumps(report.to_dict()))
    assert reverify_report(blob)


def test_reverify_detects_tampering():
    report = check_burnside(_gf4_copy_generators())
    blob = report.to_dict()
    blob["verdict"] = "theorem_instance_verified"
    assert not reverify_report(blob)
