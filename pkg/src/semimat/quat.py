"""Quaternion matrices and the nilpotent spanning decomposition.

Over the rational quaternions, every n x n matrix with n > 1 is a
rational multiple of the identity plus a rational combination of
square-zero matrices, and the decomposition here is fully constructive.
The building blocks:

* q E_rs for r != s is square-zero for any quaternion q,
* [[p, p], [-p, -p]] placed on two rows/columns is square-zero for any
  p, which handles traceless diagonals by telescoping partial sums,
* [[u, w], [-w, u]] is square-zero whenever u, w are pure imaginary
  units that anticommute (i with j, j with k, k with i), which absorbs
  the leftover pure-imaginary diagonal one component at a time.

The scalar in front of the identity is forced: it is the mean of the
real parts of the diagonal, since square-zero matrices have zero trace
(reduced trace over the quaternions).
"""

from fractions import Fraction
from math import gcd

from semimat.errors import (
    MixedFieldError,
    NotApplicable,
    ShapeMismatch,
    StructureViolation,
)
from semimat.fields import QQ, Quaternion, QUAT_ONE, QUAT_I, QUAT_J, QUAT_K
from semimat.linalg import Matrix, _make_data

_ZERO_Q = Quaternion(0, 0, 0, 0)


class QuaternionMatrix:
    """Dense matrix over the rational quaternions."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows, ncols, data):
        self.nrows = nrows
        self.ncols = ncols
        self.data = data

    @staticmethod
    def from_rows(rows):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data = []
        for row in rows:
            if len(row) != ncols:
                raise ShapeMismatch("ragged rows")
            for x in row:
                data.append(_as_quaternion(x))
        return QuaternionMatrix(nrows, ncols, data)

    @staticmethod
    def zero(nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return QuaternionMatrix(nrows, ncols, [_ZERO_Q] * (nrows * ncols))

    @staticmethod
    def identity(n):
        data = [_ZERO_Q] * (n * n)
        for i in range(n):
            data[i * n + i] = QUAT_ONE
        return QuaternionMatrix(n, n, data)

    def entry(self, i, j):
        return self.data[i * self.ncols + j]

    def is_zero(self):
        return all(q == _ZERO_Q for q in self.data)

    def is_square(self):
        return self.nrows == self.ncols

    def key(self):
        return (self.nrows, self.ncols,
                tuple((q.a, q.b, q.c, q.d) for q in self.data))

    def __eq__(self, other):
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        self._same_shape(other)
        return QuaternionMatrix(
            self.nrows, self.ncols,
            [a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other):
        self._same_shape(other)
        return QuaternionMatrix(
            self.nrows, self.ncols,
            [a - b for a, b in zip(self.data, other.data)])

    def __neg__(self):
        return QuaternionMatrix(self.nrows, self.ncols,
                                [-q for q in self.data])

    def _same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ShapeMismatch("shape mismatch %dx%d vs %dx%d"
                                % (self.nrows, self.ncols,
                                   other.nrows, other.ncols))

    def scaled(self, factor):
        f = _as_quaternion(factor)
        return QuaternionMatrix(self.nrows, self.ncols,
                                [f * q for q in self.data])

    def __mul__(self, other):
        if isinstance(other, QuaternionMatrix):
            return self.__matmul__(other)
        return self.scaled(other)

    def __rmul__(self, factor):
        f = _as_quaternion(factor)
        return QuaternionMatrix(self.nrows, self.ncols,
                                [f * q for q in self.data])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeMismatch("inner dimensions differ")
        n, k, m = self.nrows, self.ncols, other.ncols
        out = [_ZERO_Q] * (n * m)
        for i in range(n):
            base = i * k
            for t in range(k):
                a = self.data[base + t]
                if a == _ZERO_Q:
                    continue
                obase = t * m
                rbase = i * m
                for j in range(m):
                    b = other.data[obase + j]
                    if b != _ZERO_Q:
                        out[rbase + j] = out[rbase + j] + a * b
        return QuaternionMatrix(n, m, out)

    def __pow__(self, e):
        if not self.is_square():
            raise ShapeMismatch("powers need a square matrix")
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QuaternionMatrix.identity(self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def conjugate_transpose(self):
        out = [_ZERO_Q] * (self.nrows * self.ncols)
        for i in range(self.nrows):
            for j in range(self.ncols):
                out[j * self.nrows + i] = self.data[i * self.ncols + j].conjugate()
        return QuaternionMatrix(self.ncols, self.nrows, out)

    def to_strings(self):
        return [[str(self.entry(i, j)) for j in range(self.ncols)]
                for i in range(self.nrows)]

    def __str__(self):
        rows = self.to_strings()
        widths = [max(len(r[j]) for r in rows) for j in range(self.ncols)]
        return "\n".join(
            " ".join(r[j].rjust(widths[j]) for j in range(self.ncols))
            for r in rows)

    def __repr__(self):
        return "QuaternionMatrix(%dx%d)" % (self.nrows, self.ncols)


def _as_quaternion(x):
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, str):
        return Quaternion.parse(x)
    if isinstance(x, (int, Fraction)):
        return Quaternion(Fraction(x), 0, 0, 0)
    raise MixedFieldError("cannot interpret %r as a quaternion" % (x,))


def real_representation(qm):
    """The 4n x 4m rational matrix of left multiplication.

    Each entry q = a+bi+cj+dk becomes the 4x4 block of q acting on the
    basis (1, i, j, k) by left multiplication; the map is an exact
    algebra homomorphism, so products and powers transport faithfully.
    """
    n, m = qm.nrows, qm.ncols
    width = 4 * m
    flat = [Fraction(0)] * (4 * n * width)
    for i in range(n):
        for j in range(m):
            q = qm.entry(i, j)
            a, b, c, d = q.a, q.b, q.c, q.d
            block = ((a, -b, -c, -d),
                     (b, a, -d, c),
                     (c, d, a, -b),
                     (d, -c, b, a))
            for bi in range(4):
                row = block[bi]
                base = (4 * i + bi) * width + 4 * j
                for bj in range(4):
                    if row[bj]:
                        flat[base + bj] = Fraction(row[bj])
    return Matrix(QQ, 4 * n, width, _make_data(QQ, flat))


def is_nilpotent(qm):
    """Exact nilpotency via the real representation.

    A nilpotent matrix in M_n(H) has index at most 4n in the 4n x 4n
    representation; the power is taken by repeated squaring.
    """
    if not qm.is_square():
        raise ShapeMismatch("nilpotency needs a square matrix")
    rep = real_representation(qm)
    e = 1
    while e < 4 * qm.nrows:
        rep = rep @ rep
        e *= 2
        if rep.is_zero():
            return True
    return rep.is_zero()


class NilpotentDecomposition:
    """X = scalar * I + sum(coeff * N) with every N square-zero.

    terms holds (Fraction, QuaternionMatrix) pairs with primitive
    integer matrices (rational content extracted into the coefficient),
    identical matrices merged, zeros dropped. verify() rechecks the
    reconstruction and every square-zero claim from scratch.
    """

    __slots__ = ("matrix", "scalar", "terms")

    def __init__(self, matrix, scalar, terms):
        self.matrix = matrix
        self.scalar = scalar
        self.terms = terms

    def verify(self):
        n = self.matrix.nrows
        acc = QuaternionMatrix.identity(n).scaled(self.scalar)
        for coeff, N in self.terms:
            if not (N @ N).is_zero():
                return False
            acc = acc + N.scaled(coeff)
        return acc == self.matrix

    def __repr__(self):
        return "NilpotentDecomposition(scalar=%s, %d terms)" % (
            self.scalar, len(self.terms))


def _content_and_primitive(N):
    """Largest positive rational c with N = c * (integer primitive part).

    The sign is normalized so the first nonzero component of the
    primitive part is positive; returns (None, None) for zero."""
    nums = []
    dens = []
    first_sign = 0
    for q in N.data:
        for comp in (q.a, q.b, q.c, q.d):
            if comp:
                nums.append(abs(comp.numerator))
                dens.append(comp.denominator)
                if first_sign == 0:
                    first_sign = 1 if comp > 0 else -1
    if not nums:
        return None, None
    g = 0
    for x in nums:
        g = gcd(g, x)
    l = 1
    for x in dens:
        l = l * x // gcd(l, x)
    content = Fraction(g, l) * first_sign
    inv = 1 / content
    prim = N.scaled(inv)
    return content, prim


def _unit_entry(n, r, s, q):
    data = [_ZERO_Q] * (n * n)
    data[r * n + s] = q
    return QuaternionMatrix(n, n, data)


def _block_pp(n, r, s, p):
    """[[p, p], [-p, -p]] on rows/columns (r, s): square-zero for any p."""
    data = [_ZERO_Q] * (n * n)
    data[r * n + r] = p
    data[r * n + s] = p
    data[s * n + r] = -p
    data[s * n + s] = -p
    return QuaternionMatrix(n, n, data)


def _block_anticommuting(n, r, s, u, w):
    """[[u, w], [-w, u]] on rows/columns (r, s)."""
    data = [_ZERO_Q] * (n * n)
    data[r * n + r] = u
    data[r * n + s] = w
    data[s * n + r] = -w
    data[s * n + s] = u
    return QuaternionMatrix(n, n, data)


_PARTNER = {0: (QUAT_I, QUAT_J), 1: (QUAT_J, QUAT_K), 2: (QUAT_K, QUAT_I)}


def nilpotent_span_decomposition(X):
    """Write X in M_n(H), n > 1, as scalar * I + sum of square-zero terms.

    The scalar is the mean of the diagonal's real parts. If the rest is
    itself square-zero it becomes the single term; otherwise the
    off-diagonal entries, the telescoped traceless diagonal, and the
    pure-imaginary residue are emitted blockwise. The result is
    canonicalized and verified before it is returned.
    """
    if not X.is_square():
        raise ShapeMismatch("decomposition needs a square matrix")
    n = X.nrows
    if n < 2:
        raise NotApplicable("M_1(H) contains no nonzero nilpotents; "
                            "only real scalars decompose")
    scalar = Fraction(0)
    for r in range(n):
        scalar += X.entry(r, r).a
    scalar /= n
    Y = X - QuaternionMatrix.identity(n).scaled(scalar)
    raw_terms = []
    if not Y.is_zero() and (Y @ Y).is_zero():
        raw_terms.append((Fraction(1), Y))
    elif not Y.is_zero():
        for r in range(n):
            for s in range(n):
                if r != s:
                    q = Y.entry(r, s)
                    if q != _ZERO_Q:
                        raw_terms.append((Fraction(1), _unit_entry(n, r, s, q)))
        partial = _ZERO_Q
        for r in range(n - 1):
            partial = partial + Y.entry(r, r)
            if partial != _ZERO_Q:
                raw_terms.append((Fraction(1), _block_pp(n, r, r + 1, partial)))
                raw_terms.append((Fraction(-1),
                                  _unit_entry(n, r, r + 1, partial)))
                raw_terms.append((Fraction(1),
                                  _unit_entry(n, r + 1, r, partial)))
        residue = partial + Y.entry(n - 1, n - 1)
        if residue.a != 0:
            raise StructureViolation("diagonal residue kept a real part")
        if residue != _ZERO_Q:
            r, s = n - 2, n - 1
            half = Fraction(1, 2)
            # diag(0, v) = 1/2 diag(-v, v) + 1/2 diag(v, v) on (r, s)
            raw_terms.append((-half, _block_pp(n, r, s, residue)))
            raw_terms.append((half, _unit_entry(n, r, s, residue)))
            raw_terms.append((-half, _unit_entry(n, s, r, residue)))
            for ci, comp in enumerate((residue.b, residue.c, residue.d)):
                if comp == 0:
                    continue
                u, w = _PARTNER[ci]
                raw_terms.append((half * comp,
                                  _block_anticommuting(n, r, s, u, w)))
                raw_terms.append((-half * comp, _unit_entry(n, r, s, w)))
                raw_terms.append((half * comp, _unit_entry(n, s, r, w)))

    merged = {}
    order = []
    for coeff, N in raw_terms:
        content, prim = _content_and_primitive(N)
        if content is None:
            continue
        k = prim.key()
        if k in merged:
            merged[k] = (merged[k][0] + coeff * content, merged[k][1])
        else:
            merged[k] = (coeff * content, prim)
            order.append(k)
    terms = [merged[k] for k in order if merged[k][0] != 0]
    result = NilpotentDecomposition(X, scalar, terms)
    if not result.verify():
        raise StructureViolation("nilpotent decomposition failed its "
                                 "verification")
    return result
