import random
from fractions import Fraction

import pytest

from semimat.errors import (
    DivisionByZero,
    MixedFieldError,
    ParseError,
    UnsupportedField,
    UnsupportedTower,
)
from semimat.fields import (
    GF,
    QQ,
    Field,
    Quaternion,
    QUAT_I,
    QUAT_J,
    QUAT_K,
    QUAT_ONE,
    embed_raw,
    field_from_spec,
    is_subfield,
    raw_in_subfield,
)


def test_rational_field_basics():
    assert QQ.is_rational and not QQ.is_finite
    a = QQ.element(Fraction(2, 3))
    b = QQ.element("1/6")
    assert (a + b).raw == Fraction(5, 6)
    assert (a * b).raw == Fraction(1, 9)
    assert (a / b).raw == Fraction(4)
    assert QQ.parse("-7/2") == Fraction(-7, 2)
    assert QQ.format(Fraction(-7, 2)) == "-7/2"


def test_prime_field_arithmetic():
    f = GF(7)
    assert f.q == 7
    assert f.add(3, 5) == 1
    assert f.mul(3, 5) == 1
    assert f.inv(3) == 5
    assert f.neg(2) == 5
    assert f.pow(3, 6) == 1
    with pytest.raises(DivisionByZero):
        f.inv(0)


def test_gf4_canonical_modulus():
    f = GF(2, 2)
    # canonical modulus is t^2 + t + 1, so t * t = t + 1
    assert f.modulus == (1, 1, 1)
    t = f.parse("t")
    assert f.mul(t, t) == f.parse("t+1")
    assert f.format(f.mul(t, t)) == "t+1"


def test_gf9_canonical_modulus():
    f = GF(3, 2)
    # canonical modulus is t^2 + 1, so t * t = -1 = 2
    assert f.modulus == (1, 0, 1)
    t = f.parse("t")
    assert f.mul(t, t) == 2


def test_gf_exp_log_tables_consistent():
    rng = random.Random(1)
    for field in (GF(2, 3), GF(3, 2), GF(2, 4), GF(5, 2)):
        for _ in range(40):
            a = rng.randrange(1, field.q)
            b = rng.randrange(1, field.q)
            assert field.mul(a, field.inv(a)) == field.one
            assert field.mul(a, b) == field.mul(b, a)
            assert field.pow(a, field.q - 1) == field.one


def test_field_axioms_random():
    rng = random.Random(2)
    for field in (GF(2), GF(5), GF(2, 2), GF(3, 3), QQ):
        for _ in range(50):
            a = field.random(rng)
            b = field.random(rng)
            c = field.random(rng)
            assert field.add(a, field.neg(a)) == field.zero
            assert field.mul(a, field.add(b, c)) == field.add(
                field.mul(a, b), field.mul(a, c))
            assert field.mul(field.mul(a, b), c) == field.mul(
                a, field.mul(b, c))
            if a != field.zero:
                assert field.mul(a, field.inv(a)) == field.one


def test_parse_format_roundtrip():
    rng = random.Random(3)
    for field in (GF(2), GF(7), GF(2, 2), GF(3, 2), GF(2, 4), QQ):
        for _ in range(60):
            a = field.random(rng)
            assert field.parse(field.format(a)) == a


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        QQ.parse("1/0")
    with pytest.raises(ParseError):
        QQ.parse("one")
    with pytest.raises(ParseError):
        GF(2, 2).parse("t+")
    with pytest.raises(ParseError):
        GF(5).parse("t")


def test_unsupported_fields_rejected():
    with pytest.raises(UnsupportedField):
        GF(4)
    with pytest.raises(UnsupportedField):
        GF(6)
    with pytest.raises(UnsupportedField):
        GF(2, 17)  # 2^17 exceeds the order cap
    with pytest.raises(UnsupportedField):
        GF(2, 2, modulus=(0, 0, 1))  # t^2 is reducible


def test_explicit_modulus_accepted():
    f = GF(2, 2, modulus=(1, 1, 1))
    assert f is GF(2, 2)
    g = GF(2, 3, modulus=(1, 1, 0, 1))
    assert g.modulus == (1, 1, 0, 1)


def test_field_from_spec():
    assert field_from_spec("Q") is QQ
    assert field_from_spec("GF(4)") is GF(2, 2)
    assert field_from_spec("GF(2^3)") is GF(2, 3)
    assert field_from_spec("GF(49)") is GF(7, 2)
    with pytest.raises(UnsupportedField):
        field_from_spec("GF(12)")
    with pytest.raises(UnsupportedField):
        field_from_spec("R")


def test_subfield_tower():
    f2, f4, f3 = GF(2), GF(2, 2), GF(3)
    assert is_subfield(f2, f4)
    assert not is_subfield(f3, f4)
    assert not is_subfield(f4, f2)
    assert embed_raw(f2, f4, 1) == 1
    assert raw_in_subfield(f4, f2, 1)
    assert not raw_in_subfield(f4, f2, 2)  # the element t
    with pytest.raises(UnsupportedTower):
        embed_raw(f3, f4, 1)


def test_field_elements_mixed_field_rejected():
    a = GF(3).element(1)
    b = GF(5).element(1)
    with pytest.raises(MixedFieldError):
        a + b


def test_element_operators():
    f = GF(7)
    a, b = f.element(3), f.element(5)
    assert (a + b).raw == 1
    assert (a - b).raw == 5
    assert (a * b).raw == 1
    assert (a / b).raw == f.mul(3, f.inv(5))
    assert (-a).raw == 4
    assert (a ** 6).raw == 1
    assert a == f.element(3) and a != b


def test_quaternion_hamilton_relations():
    assert QUAT_I * QUAT_J == QUAT_K
    assert QUAT_J * QUAT_K == QUAT_I
    assert QUAT_K * QUAT_I == QUAT_J
    assert QUAT_J * QUAT_I == -QUAT_K
    assert QUAT_I * QUAT_I == -QUAT_ONE
    one_plus_i = Quaternion(1, 1)
    one_minus_i = Quaternion(1, -1)
    assert one_plus_i * one_minus_i == Quaternion(2)


def test_quaternion_norm_inverse():
    q = Quaternion(1, 2, -1, Fraction(1, 2))
    assert q.norm() == 1 + 4 + 1 + Fraction(1, 4)
    assert q * q.inverse() == QUAT_ONE
    assert q.conjugate().a == q.a and q.conjugate().b == -q.b
    with pytest.raises(DivisionByZero):
        Quaternion().inverse()


def test_quaternion_parse_str_roundtrip():
    rng = random.Random(4)
    for _ in range(60):
        q = Quaternion(*[Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                         for _ in range(4)])
        assert Quaternion.parse(str(q)) == q
    assert Quaternion.parse("1+2i-j") == Quaternion(1, 2, -1, 0)
    assert str(Quaternion(0, 0, 0, -1)) == "-k"
    assert str(Quaternion()) == "0"


def test_field_identity_cached():
    assert GF(5) is GF(5)
    assert GF(2, 2) is GF(2, 2)
    assert GF(3) != GF(5)
    assert QQ != GF(2)
