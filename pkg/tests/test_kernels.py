"""Backend parity: compiled kernels must match the pure-Python fallback
on identical flat buffers, and SEMIMAT_PURE must force the fallback."""

import os
import random
import subprocess
import sys
from array import array

import pytest

from semimat._ffcore import BACKEND, backend, pykernels
from semimat.fields import GF

try:
    from semimat._ffcore import _ckernels
except ImportError:
    _ckernels = None

FIELDS = (GF(2), GF(3), GF(5), GF(2, 2), GF(3, 2), GF(7))


def _tables(field):
    q = field.q
    add = array("H", [field.add(a, b) for a in range(q) for b in range(q)])
    mul = array("H", [field.mul(a, b) for a in range(q) for b in range(q)])
    neg = array("H", [field.neg(a) for a in range(q)])
    inv = array("H", [0] + [field.inv(a) for a in range(1, q)])
    return add, mul, neg, inv


def _rand_flat(field, rows, cols, rng):
    return array("H", [rng.randrange(field.q) for _ in range(rows * cols)])


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_matmul_parity():
    rng = random.Random(0)
    for field in FIELDS:
        add, mul, neg, inv = _tables(field)
        for _ in range(30):
            n, k, m = (rng.randint(1, 6) for _ in range(3))
            a = _rand_flat(field, n, k, rng)
            b = _rand_flat(field, k, m, rng)
            out_c = array("H", bytes(2 * n * m))
            out_p = array("H", bytes(2 * n * m))
            _ckernels.matmul(n, k, m, a, b, field.q, add, mul, out_c)
            pykernels.matmul(n, k, m, a, b, field.q, add, mul, out_p)
            assert out_c == out_p


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_rref_parity():
    rng = random.Random(1)
    for field in FIELDS:
        add, mul, neg, inv = _tables(field)
        for _ in range(30):
            n, m = rng.randint(1, 6), rng.randint(1, 6)
            flat = _rand_flat(field, n, m, rng)
            work_c = flat[:]
            work_p = flat[:]
            piv_c = _ckernels.rref(n, m, work_c, field.q, add, mul, neg, inv)
            piv_p = pykernels.rref(n, m, work_p, field.q, add, mul, neg, inv)
            assert list(piv_c) == list(piv_p)
            assert work_c == work_p


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_reduce_row_parity():
    rng = random.Random(2)
    for field in FIELDS:
        add, mul, neg, inv = _tables(field)
        for _ in range(30):
            n, m = rng.randint(1, 4), rng.randint(4, 7)
            basis = _rand_flat(field, n, m, rng)
            pivots = _ckernels.rref(n, m, basis, field.q, add, mul, neg, inv)
            rank = len(pivots)
            vec = array("H", [rng.randrange(field.q) for _ in range(m)])
            vec_c = vec[:]
            vec_p = vec[:]
            piv = array("H", pivots)
            _ckernels.reduce_row(vec_c, rank, m, basis, piv,
                                 field.q, add, mul, neg)
            pykernels.reduce_row(vec_p, rank, m, basis, piv,
                                 field.q, add, mul, neg)
            assert vec_c == vec_p
            for p in pivots:
                assert vec_c[p] == 0


def test_backend_reports_a_name():
    assert backend() in ("c", "python")
    assert BACKEND == backend()


def test_pure_env_forces_python_backend():
    env = dict(os.environ, SEMIMAT_PURE="1")
    code = ("from semimat._ffcore import BACKEND; print(BACKEND)")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_matrix_results_identical_across_backends():
    # A small end-to-end computation must give byte-identical output
    # whether or not the compiled kernels are in play.
    code = (
        "from semimat.fields import GF\n"
        "from semimat.linalg import Matrix, random_matrix, char_poly\n"
        "import random\n"
        "rng = random.Random(42)\n"
        "f = GF(3, 2)\n"
        "a = random_matrix(f, 5, 5, rng)\n"
        "b = random_matrix(f, 5, 5, rng)\n"
        "prod = a @ b\n"
        "red, piv = prod.rref()\n"
        "print(prod.to_strings())\n"
        "print(red.to_strings())\n"
        "print(piv)\n"
        "print(str(char_poly(a)))\n"
    )
    runs = {}
    for name, extra in (("default", {}), ("pure", {"SEMIMAT_PURE": "1"})):
        env = dict(os.environ, **extra)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        runs[name] = out.stdout
    assert runs["default"] == runs["pure"]
