import random
from fractions import Fraction

import pytest

from semimat.errors import (
    MixedFieldError,
    NonMonicInput,
    ShapeMismatch,
    SingularMatrix,
)
from semimat.fields import GF, QQ
from semimat.linalg import (
    EchelonSpan,
    Matrix,
    Polynomial,
    Subspace,
    char_poly,
    factor_gf,
    is_triangularizable_single,
    random_invertible,
    random_matrix,
    splits_with_roots,
)

FIELDS = (GF(2), GF(3), GF(5), GF(2, 2), GF(3, 2), QQ)


def test_matrix_construction_and_access():
    m = Matrix.from_rows(QQ, [[1, 2], [3, "4/3"]])
    assert m.entry(1, 1).raw == Fraction(4, 3)
    assert m.raw_entry(0, 1) == 2
    assert m.trace().raw == 1 + Fraction(4, 3)
    with pytest.raises(ShapeMismatch):
        Matrix.from_rows(QQ, [[1, 2], [3]])


def test_matrix_arithmetic_hand_examples():
    f = GF(5)
    a = Matrix.from_rows(f, [[1, 2], [3, 4]])
    b = Matrix.from_rows(f, [[0, 1], [1, 0]])
    assert (a + b) == Matrix.from_rows(f, [[1, 3], [4, 4]])
    assert (a @ b) == Matrix.from_rows(f, [[2, 1], [4, 3]])
    assert (a - a).is_zero()
    assert a.transpose() == Matrix.from_rows(f, [[1, 3], [2, 4]])
    assert (a ** 0).is_identity()
    assert a ** 3 == a @ a @ a


def test_matmul_mixed_field_rejected():
    a = Matrix.identity(GF(2), 2)
    b = Matrix.identity(GF(3), 2)
    with pytest.raises(MixedFieldError):
        a @ b


def test_rref_and_rank():
    f = GF(7)
    m = Matrix.from_rows(f, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    reduced, pivots = m.rref()
    assert pivots == [0, 1]
    assert reduced.raw_entry(0, 1) == 0 and reduced.raw_entry(2, 2) == 0
    assert m.rank() == 2
    assert Matrix.identity(f, 4).rank() == 4


def test_inverse_and_singular():
    f = GF(11)
    rng = random.Random(7)
    for _ in range(20):
        a = random_invertible(f, 4, rng)
        assert (a @ a.inverse()).is_identity()
        assert (a.inverse() @ a).is_identity()
    singular = Matrix.from_rows(f, [[1, 2], [2, 4]])
    with pytest.raises(SingularMatrix):
        singular.inverse()


def test_kernel_is_annihilated():
    rng = random.Random(8)
    for field in FIELDS:
        for _ in range(15):
            m = random_matrix(field, 4, 3, rng)
            ker = m.kernel()
            assert ker.dim == 3 - m.rank()
            for row in ker.basis_rows:
                out = m.matvec(row)
                assert all(x == field.zero for x in out)


def test_matvec_matches_manual_sum():
    rng = random.Random(9)
    for field in FIELDS:
        m = random_matrix(field, 3, 3, rng)
        v = [field.random(rng) for _ in range(3)]
        out = m.matvec(v)
        for i in range(3):
            acc = field.zero
            for j in range(3):
                acc = field.add(acc, field.mul(m.raw_entry(i, j), v[j]))
            assert out[i] == acc


def test_echelon_span_insert_and_coordinates():
    f = GF(3)
    span = EchelonSpan(f, 3)
    assert span.insert([1, 2, 0])
    assert not span.insert([2, 1, 0])  # scalar multiple
    assert span.insert([0, 0, 1])
    assert span.contains([1, 2, 1])
    coords = span.coordinates([2, 1, 2])
    rows, _ = span.canonical_rows()
    acc = [f.zero] * 3
    for c, row in zip(coords, rows):
        for j in range(3):
            acc[j] = f.add(acc[j], f.mul(c, row[j]))
    assert acc == [2, 1, 2]
    with pytest.raises(ValueError):
        span.coordinates([1, 1, 1]) if span.contains([1, 1, 1]) else (_ for _ in ()).throw(ValueError)


def test_subspace_canonical_equality():
    f = GF(5)
    a = Subspace.from_vectors(f, 3, [[1, 2, 3], [0, 1, 4]])
    b = Subspace.from_vectors(f, 3, [[1, 3, 2], [0, 2, 3]])
    # same span given by different generators
    assert a.dim == b.dim == 2
    assert (a == b) == all(b.contains_vector(r) for r in a.basis_rows)


def test_subspace_intersect_and_add_dims():
    rng = random.Random(10)
    for field in (GF(2), GF(3), QQ):
        for _ in range(20):
            n = 4
            u = Subspace.from_vectors(
                field, n, [[field.random(rng) for _ in range(n)]
                           for _ in range(2)])
            w = Subspace.from_vectors(
                field, n, [[field.random(rng) for _ in range(n)]
                           for _ in range(2)])
            inter = u.intersect(w)
            total = u.add(w)
            assert inter.dim + total.dim == u.dim + w.dim
            for row in inter.basis_rows:
                assert u.contains_vector(row) and w.contains_vector(row)


def test_subspace_annihilator():
    f = GF(3)
    u = Subspace.from_vectors(f, 4, [[1, 0, 2, 0], [0, 1, 1, 1]])
    ann = u.annihilator()
    assert ann.dim == 2
    for a in ann.basis_rows:
        for b in u.basis_rows:
            dot = f.zero
            for x, y in zip(a, b):
                dot = f.add(dot, f.mul(x, y))
            assert dot == f.zero


def test_polynomial_arithmetic():
    f = GF(5)
    x = Polynomial.x(f)
    p = x * x + Polynomial.constant(f, 3) * x + Polynomial.constant(f, 1)
    q = x + Polynomial.constant(f, 2)
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert p.gcd(q).is_monic()
    assert p.evaluate(f.neg(2)) == rem.evaluate(f.neg(2))


def test_char_poly_hand_examples():
    # nilpotent unit: x^2
    e12 = Matrix.from_rows(QQ, [[0, 1], [0, 0]])
    assert str(char_poly(e12)) == "x^2"
    # identity: (x - 1)^3
    cp = char_poly(Matrix.identity(QQ, 3))
    assert cp.evaluate(Fraction(1)) == Fraction(0)
    assert cp.degree() == 3
    # companion of x^2 + x + 1 over GF(2)
    comp = Matrix.from_rows(GF(2), [[0, 1], [1, 1]])
    assert str(char_poly(comp)) == "x^2+x+1"


def test_char_poly_similarity_invariant_and_cayley_hamilton():
    rng = random.Random(11)
    for field in FIELDS:
        for _ in range(10):
            n = rng.randint(2, 4)
            a = random_matrix(field, n, n, rng)
            cp = char_poly(a)
            assert cp.degree() == n and cp.is_monic()
            assert cp.evaluate_matrix(a).is_zero()
            p = random_invertible(field, n, rng)
            assert char_poly(p.inverse() @ a @ p) == cp


def test_char_poly_constant_term_is_det_sign():
    # det(A) = (-1)^n * cp(0); check against the 2x2 formula
    rng = random.Random(12)
    for field in FIELDS:
        a = random_matrix(field, 2, 2, rng)
        cp = char_poly(a)
        det = field.sub(field.mul(a.raw_entry(0, 0), a.raw_entry(1, 1)),
                        field.mul(a.raw_entry(0, 1), a.raw_entry(1, 0)))
        assert cp.evaluate(field.zero) == det


def test_splits_with_roots_examples():
    f5 = GF(5)
    x = Polynomial.x(f5)
    p = x * x + Polynomial.constant(f5, 1)  # x^2 + 1 = (x-2)(x-3) mod 5
    sr = splits_with_roots(p)
    assert sr.splits and [r for r, _ in sr.roots] == [2, 3]

    f3 = GF(3)
    x3 = Polynomial.x(f3)
    sr2 = splits_with_roots(x3 * x3 + Polynomial.constant(f3, 1))
    assert not sr2.splits and sr2.nonsplit is not None

    xq = Polynomial.x(QQ)
    three = Polynomial.constant(QQ, 3)
    two = Polynomial.constant(QQ, 2)
    sr3 = splits_with_roots(xq * xq - three * xq + two)
    assert sr3.splits and [r for r, _ in sr3.roots] == [1, 2]
    sr4 = splits_with_roots(xq * xq - three * xq + Polynomial.constant(QQ, 1))
    assert not sr4.splits


def test_splits_reconstruction_random():
    rng = random.Random(13)
    for field in FIELDS:
        for _ in range(20):
            roots = [field.random(rng) for _ in range(rng.randint(1, 4))]
            p = Polynomial.from_roots(field, roots)
            sr = splits_with_roots(p)
            assert sr.splits
            rebuilt = Polynomial.one(field)
            for r, mult in sr.roots:
                for _ in range(mult):
                    rebuilt = rebuilt * Polynomial.from_roots(field, [r])
            assert rebuilt == p


def test_factor_gf_reconstruction_random():
    rng = random.Random(14)
    for field in (GF(2), GF(3), GF(2, 2), GF(5), GF(3, 2)):
        for _ in range(25):
            deg = rng.randint(1, 8)
            coeffs = [field.random(rng) for _ in range(deg)] + [field.one]
            p = Polynomial(field, coeffs)
            factors = factor_gf(p)
            rebuilt = Polynomial.one(field)
            for fac, mult in factors:
                assert fac.is_monic()
                for _ in range(mult):
                    rebuilt = rebuilt * fac
            assert rebuilt == p
            for fac, _ in factors:
                if fac.degree() >= 2:
                    assert not splits_with_roots(fac).splits


def test_factor_gf_deterministic():
    f = GF(2)
    coeffs = [1, 0, 1, 1, 0, 0, 1, 1]  # fixed degree-7 polynomial
    p = Polynomial(f, coeffs + [1])
    assert factor_gf(p) == factor_gf(p)


def test_is_triangularizable_single():
    assert is_triangularizable_single(Matrix.from_rows(GF(5), [[1, 1], [0, 2]]))
    assert not is_triangularizable_single(
        Matrix.from_rows(GF(3), [[0, 2], [1, 0]]))


def test_embed_matrix_to_extension():
    f2, f4 = GF(2), GF(2, 2)
    m = Matrix.from_rows(f2, [[1, 0], [1, 1]])
    e = m.embed(f4)
    assert e.field is f4
    assert e.raw_entry(1, 0) == 1


def test_char_poly_degree_one_and_zero_matrix():
    f = GF(3)
    one = Matrix.from_rows(f, [[2]])
    assert str(char_poly(one)) == "x+1"
    z = Matrix.zero(QQ, 3)
    cp = char_poly(z)
    assert cp.degree() == 3 and cp.evaluate(Fraction(0)) == 0
