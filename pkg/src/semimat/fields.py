"""Exact scalar arithmetic: rationals, finite fields GF(p^m), rational quaternions.

Field elements travel through the library in a raw form (Fraction for the
rationals, an integer encoding for finite fields) wrapped by matrices and
polynomials; FieldElement is the thin operator-overloaded wrapper for user
code. A finite field element with polynomial digits (c_0, ..., c_{m-1}) over
GF(p) is encoded as the integer sum(c_i * p^i), so encodings are canonical
and element equality is integer equality.
"""

import re
from array import array
from fractions import Fraction

from semimat.errors import (
    DivisionByZero,
    MixedFieldError,
    ParseError,
    UnsupportedField,
    UnsupportedTower,
)

MAX_ORDER = 1 << 16        # largest supported finite field order
KERNEL_TABLE_MAX = 512     # largest q for which full q*q kernel tables are built


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# digit polynomials over GF(p), used to build extension-field tables
# ---------------------------------------------------------------------------

def _digits(raw, p, m):
    out = [0] * m
    for i in range(m):
        raw, out[i] = divmod(raw, p)
    return out


def _undigits(digits, p):
    raw = 0
    for c in reversed(digits):
        raw = raw * p + c
    return raw


def _poly_deg(d):
    for i in range(len(d) - 1, -1, -1):
        if d[i]:
            return i
    return -1


def _poly_mulmod(a, b, mod, p):
    """Product of digit polynomials a, b reduced by the monic modulus."""
    m = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1 or 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(m):
                prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
    return prod[:m] + [0] * (m - len(prod))


def _poly_divmod_gfp(num, den, p):
    """Schoolbook division of digit polynomials over GF(p)."""
    num = list(num)
    dd = _poly_deg(den)
    lead_inv = pow(den[dd], p - 2, p)
    quot = [0] * max(len(num) - dd, 1)
    for i in range(_poly_deg(num), dd - 1, -1):
        c = num[i]
        if c:
            f = (c * lead_inv) % p
            quot[i - dd] = f
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - f * den[j]) % p
    return quot, num


def _gfp_irreducible(digits, p):
    """Trial factorization of a monic digit polynomial up to half its degree."""
    m = _poly_deg(digits)
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        pd = p ** d
        for enc in range(pd, 2 * pd):
            den = _digits(enc, p, d + 1)
            _, rem = _poly_divmod_gfp(digits, den, p)
            if _poly_deg(rem) < 0:
                return False
    return True


def _canonical_modulus(p, m):
    """Monic irreducible of degree m with the least integer encoding."""
    pm = p ** m
    for enc in range(pm, 2 * pm):
        digits = _digits(enc, p, m + 1)
        if digits[0] == 0 and m > 1:
            continue
        if _gfp_irreducible(digits, p):
            return tuple(digits)
    raise UnsupportedField("no irreducible polynomial found for GF(%d^%d)" % (p, m))


# ---------------------------------------------------------------------------
# field descriptors
# ---------------------------------------------------------------------------

class Field:
    """Immutable descriptor of an exact coefficient field.

    p == 0 marks the rationals; otherwise the field is GF(p^m) with the
    stored monic modulus (None when m == 1). Use the module-level QQ
    singleton and the GF() factory rather than calling this directly.
    """

    __slots__ = ("p", "m", "q", "modulus", "zero", "one",
                 "_exp", "_log", "_tables")

    def __init__(self, p, m, modulus):
        self.p = p
        self.m = m
        self.q = p ** m if p else None
        self.modulus = modulus
        self.zero = Fraction(0) if p == 0 else 0
        self.one = Fraction(1) if p == 0 else 1
        self._exp = None
        self._log = None
        self._tables = None
        if p and m > 1:
            self._build_exp_log()

    # -- identity ----------------------------------------------------------

    @property
    def is_rational(self):
        return self.p == 0

    @property
    def is_finite(self):
        return self.p != 0

    def __eq__(self, other):
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def spec_string(self):
        return "Q" if self.p == 0 else "GF(%d)" % self.q

    def modulus_string(self):
        if self.modulus is None:
            return None
        return _format_gf_digits(list(self.modulus), self.p)

    def __repr__(self):
        return self.spec_string()

    # -- scalar arithmetic on raw values ------------------------------------

    def add(self, a, b):
        p = self.p
        if p == 0:
            return a + b
        if self.m == 1:
            return (a + b) % p
        out, shift = 0, 1
        while a or b:
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def neg(self, a):
        p = self.p
        if p == 0:
            return -a
        if p == 2:
            return a
        if self.m == 1:
            return (p - a) % p
        out, shift = 0, 1
        while a:
            out += ((p - a % p) % p) * shift
            a //= p
            shift *= p
        return out

    def sub(self, a, b):
        if self.p == 0:
            return a - b
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.p == 0:
            return a * b
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        qm1 = self.q - 1
        return self._exp[(self._log[a] + self._log[b]) % qm1]

    def inv(self, a):
        if self.p == 0:
            if a == 0:
                raise DivisionByZero("inverse of 0 in Q")
            return 1 / a
        if a == 0:
            raise DivisionByZero("inverse of 0 in %s" % self.spec_string())
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        qm1 = self.q - 1
        return self._exp[(qm1 - self._log[a]) % qm1]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.p == 0:
            return a ** e
        if self.m == 1:
            return pow(a, e, self.p) if e else 1
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, k):
        if self.p == 0:
            return Fraction(k)
        return k % self.p

    def is_zero(self, a):
        return a == self.zero

    def sort_key(self, a):
        """Key for the canonical total order (encodings for GF, value for Q)."""
        return a

    def elements(self):
        if self.p == 0:
            raise UnsupportedField("cannot enumerate Q")
        return range(self.q)

    def random(self, rng):
        if self.p == 0:
            return Fraction(rng.randint(-8, 8), rng.randint(1, 6))
        return rng.randrange(self.q)

    # -- extension-field internals ------------------------------------------

    def _build_exp_log(self):
        p, m, q = self.p, self.m, self.q
        mod = list(self.modulus)
        order_factors = _prime_factors(q - 1)

        def polypow(base, e):
            acc = [1] + [0] * (m - 1)
            cur = list(base)
            while e:
                if e & 1:
                    acc = _poly_mulmod(acc, cur, mod, p)
                e >>= 1
                if e:
                    cur = _poly_mulmod(cur, cur, mod, p)
            return acc

        gen = None
        for cand in range(2, q):
            digs = _digits(cand, p, m)
            is_gen = True
            for f in order_factors:
                w = polypow(digs, (q - 1) // f)
                if _poly_deg(w) == 0 and w[0] == 1:
                    is_gen = False
                    break
            if is_gen:
                gen = digs
                break
        if gen is None:
            raise UnsupportedField("no generator found for %s" % self.spec_string())

        exp = [0] * (q - 1)
        log = [-1] * q
        cur = [1] + [0] * (m - 1)
        for i in range(q - 1):
            enc = _undigits(cur, p)
            exp[i] = enc
            log[enc] = i
            cur = _poly_mulmod(cur, gen, mod, p)
        if _undigits(cur, p) != 1:
            raise UnsupportedField("generator order check failed for %s"
                                   % self.spec_string())
        self._exp = exp
        self._log = log

    def kernel_tables(self):
        """Flat q*q add/mul plus length-q neg/inv tables, or None if q is too big.

        Built lazily and cached; these drive the _ffcore kernels.
        """
        if self.p == 0 or self.q > KERNEL_TABLE_MAX:
            return None
        if self._tables is None:
            q = self.q
            add = array("H", bytes(2 * q * q))
            mul = array("H", bytes(2 * q * q))
            neg = array("H", bytes(2 * q))
            inv = array("H", bytes(2 * q))
            for a in range(q):
                neg[a] = self.neg(a)
                if a:
                    inv[a] = self.inv(a)
                base = a * q
                for b in range(q):
                    add[base + b] = self.add(a, b)
                    mul[base + b] = self.mul(a, b)
            self._tables = (add, mul, neg, inv)
        return self._tables

    # -- elements, parsing, formatting ---------------------------------------

    def element(self, x):
        return FieldElement(self, self.coerce(x))

    def coerce(self, x):
        """Raw value from a FieldElement, int, Fraction, or literal string."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise MixedFieldError("element of %s used in %s"
                                      % (x.field.spec_string(), self.spec_string()))
            return x.raw
        if isinstance(x, bool):
            raise TypeError("bool is not a field value")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            if self.p == 0:
                return x
            if x.denominator == 1:
                return self.from_int(x.numerator)
            raise MixedFieldError("non-integer rational in %s" % self.spec_string())
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError("cannot interpret %r as an element of %s"
                        % (x, self.spec_string()))

    def parse(self, text):
        if self.p == 0:
            return _parse_rational(text)
        return _parse_gf(self, text)

    def format(self, raw):
        if self.p == 0:
            return str(raw)
        if self.m == 1:
            return str(raw)
        return _format_gf_digits(_digits(raw, self.p, self.m), self.p)


_FIELD_CACHE = {}

QQ = Field(0, 1, None)


def GF(p, m=1, modulus=None):
    """Finite field descriptor GF(p^m), order capped at 2^16.

    The modulus, when given, is a monic coefficient sequence
    (c_0, ..., c_m) over GF(p), low degree first; when omitted the
    canonical (lowest-encoding) irreducible is chosen. Primality of p and
    irreducibility of the modulus are verified eagerly.
    """
    if not isinstance(p, int) or not isinstance(m, int):
        raise UnsupportedField("p and m must be integers")
    if m < 1:
        raise UnsupportedField("extension degree must be at least 1")
    if not _is_prime(p):
        raise UnsupportedField("%r is not prime" % (p,))
    if p ** m > MAX_ORDER:
        raise UnsupportedField("field order %d exceeds the supported bound %d"
                               % (p ** m, MAX_ORDER))
    if modulus is not None:
        if m == 1:
            raise UnsupportedField("modulus is only meaningful for m > 1")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[m] != 1:
            raise UnsupportedField("modulus must be monic of degree m")
        if not _gfp_irreducible(list(modulus), p):
            raise UnsupportedField("modulus is reducible over GF(%d)" % p)
    elif m > 1:
        modulus = _canonical_modulus(p, m)
    key = (p, m, modulus)
    field = _FIELD_CACHE.get(key)
    if field is None:
        field = Field(p, m, modulus)
        _FIELD_CACHE[key] = field
    return field


def field_from_spec(text, modulus=None):
    """Field named by a spec string: "Q", "GF(q)", or "GF(p^m)".

    "GF(q)" with composite q is factored into its prime power; an
    explicit modulus (coefficient sequence) overrides the canonical one.
    """
    s = text.strip()
    if s in ("Q", "QQ"):
        return QQ
    msg = "unrecognized field spec %r" % (text,)
    if not (s.startswith("GF(") and s.endswith(")")):
        raise UnsupportedField(msg)
    inner = s[3:-1].strip()
    try:
        if "^" in inner:
            ptxt, mtxt = inner.split("^", 1)
            p, m = int(ptxt), int(mtxt)
        else:
            q = int(inner)
            if q < 2:
                raise ValueError
            p = 2
            while p * p <= q and q % p:
                p += 1
            if q % p:
                p = q
            m = 0
            qq = q
            while qq > 1 and qq % p == 0:
                qq //= p
                m += 1
            if qq != 1:
                raise UnsupportedField("%d is not a prime power" % q)
    except ValueError:
        raise UnsupportedField(msg)
    return GF(p, m, modulus)


# ---------------------------------------------------------------------------
# subfield towers
# ---------------------------------------------------------------------------

def is_subfield(F, K):
    """True for the supported towers: F == K, or GF(p) inside GF(p^m)."""
    if F == K:
        return True
    return (F.is_finite and K.is_finite and F.p == K.p
            and F.m == 1 and K.m > 1)


def embed_raw(F, K, raw):
    """Raw image of an F-element inside K along the supported tower."""
    if F == K:
        return raw
    if not is_subfield(F, K):
        raise UnsupportedTower("no supported embedding of %s into %s"
                               % (F.spec_string(), K.spec_string()))
    return raw  # constant polynomial: same encoding


def raw_in_subfield(K, F, raw):
    """Whether a raw K-element lies in the embedded image of F."""
    if F == K:
        return True
    if not is_subfield(F, K):
        raise UnsupportedTower("no supported embedding of %s into %s"
                               % (F.spec_string(), K.spec_string()))
    return raw < F.p


def retract_raw(K, F, raw):
    """Preimage in F of a raw K-element known to lie in the embedded F."""
    if F == K:
        return raw
    if not raw_in_subfield(K, F, raw):
        raise UnsupportedTower("%s is not in the embedded %s"
                               % (K.format(raw), F.spec_string()))
    return raw


def embed_element(x, K):
    return FieldElement(K, embed_raw(x.field, K, x.raw))


# ---------------------------------------------------------------------------
# element wrapper
# ---------------------------------------------------------------------------

class FieldElement:
    """A field value paired with its descriptor, with operator overloads."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFieldError("mixed operands: %s and %s"
                                      % (self.field.spec_string(),
                                         other.field.spec_string()))
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction) and self.field.p == 0:
            return other
        return None

    def __add__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.raw, raw))

    __radd__ = __add__

    def __sub__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.raw, raw))

    def __rsub__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(raw, self.raw))

    def __mul__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.raw, raw))

    def __rtruediv__(self, other):
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(raw, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.raw, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return self.raw == raw

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return "%s[%s]" % (self.field.spec_string(), self.field.format(self.raw))


# ---------------------------------------------------------------------------
# literal parsing and formatting
# ---------------------------------------------------------------------------

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_TERM_SPLIT_RE = re.compile(r"[+-]?[^+-]+")
_GF_TERM_RE = re.compile(r"([+-]?)(\d+)?(t(?:\^(\d+))?)?")
_QUAT_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([ijk])?")


def _parse_rational(text):
    if not _RATIONAL_RE.fullmatch(text):
        raise ParseError("bad rational literal", token=text)
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ParseError("zero denominator", token=text)
    return Fraction(text)


def _split_terms(text):
    if not text:
        raise ParseError("empty scalar literal", token=text)
    terms = _TERM_SPLIT_RE.findall(text)
    if "".join(terms) != text:
        raise ParseError("bad scalar literal", token=text)
    return terms


def _parse_gf(field, text):
    if field.m == 1:
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ParseError("bad %s literal" % field.spec_string(), token=text)
        return field.from_int(int(text))
    p, m = field.p, field.m
    coeffs = {}
    for term in _split_terms(text):
        match = _GF_TERM_RE.fullmatch(term)
        if not match or (match.group(2) is None and match.group(3) is None):
            raise ParseError("bad %s literal" % field.spec_string(), token=text)
        sign, digits, tpart, exp = match.groups()
        coeff = int(digits) if digits is not None else 1
        if sign == "-":
            coeff = -coeff
        e = 0
        if tpart is not None:
            e = int(exp) if exp is not None else 1
        coeffs[e] = (coeffs.get(e, 0) + coeff) % p
    deg = max(coeffs)
    poly = [coeffs.get(i, 0) for i in range(deg + 1)]
    if deg >= m:
        _, poly = _poly_divmod_gfp(poly, list(field.modulus), p)
        poly = poly[:m]
    return _undigits(poly[:m] + [0] * (m - len(poly)), p)


def _format_gf_digits(digits, p):
    terms = []
    for e in range(len(digits) - 1, -1, -1):
        c = digits[e]
        if not c:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            s = "" if c == 1 else str(c)
            s += "t" if e == 1 else "t^%d" % e
            terms.append(s)
    return "+".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# rational quaternions
# ---------------------------------------------------------------------------

class Quaternion:
    """Quaternion a + b*i + c*j + d*k with exact rational components."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)

    def __add__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        return Quaternion(self.a + other.a, self.b + other.b,
                          self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        return Quaternion(self.a - other.a, self.b - other.b,
                          self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        return other * self

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        other = _as_quaternion(other)
        if other is None:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def conjugate(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self):
        """Reduced norm a^2 + b^2 + c^2 + d^2 (a rational, 0 only at 0)."""
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self):
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of the zero quaternion")
        conj = self.conjugate()
        return Quaternion(conj.a / n, conj.b / n, conj.c / n, conj.d / n)

    @property
    def real(self):
        return self.a

    def is_real(self):
        return not (self.b or self.c or self.d)

    @staticmethod
    def parse(text):
        a = b = c = d = Fraction(0)
        for term in _split_terms(text):
            match = _QUAT_TERM_RE.fullmatch(term)
            if not match or (match.group(2) is None and match.group(3) is None):
                raise ParseError("bad quaternion literal", token=text)
            sign, mag, unit = match.groups()
            if mag is not None and "/" in mag and int(mag.split("/")[1]) == 0:
                raise ParseError("zero denominator", token=text)
            coeff = Fraction(mag) if mag is not None else Fraction(1)
            if sign == "-":
                coeff = -coeff
            if unit is None:
                a += coeff
            elif unit == "i":
                b += coeff
            elif unit == "j":
                c += coeff
            else:
                d += coeff
        return Quaternion(a, b, c, d)

    def __str__(self):
        parts = []
        if self.a:
            parts.append(str(self.a))
        for coeff, sym in ((self.b, "i"), (self.c, "j"), (self.d, "k")):
            if not coeff:
                continue
            sign = "-" if coeff < 0 else "+"
            mag = -coeff if coeff < 0 else coeff
            body = sym if mag == 1 else "%s%s" % (mag, sym)
            parts.append(sign + body)
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self):
        return "Quaternion(%s)" % self


def _as_quaternion(x):
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, Fraction)):
        return Quaternion(x)
    return None


QUAT_ONE = Quaternion(1)
QUAT_I = Quaternion(0, 1)
QUAT_J = Quaternion(0, 0, 1)
QUAT_K = Quaternion(0, 0, 0, 1)
QUAT_UNITS = (QUAT_ONE, QUAT_I, QUAT_J, QUAT_K)
