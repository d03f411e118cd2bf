"""Exact matrices, subspaces and univariate polynomials over the field layer.

Matrices act on column vectors from the left. Raw storage is row-major:
array('H') of encodings for kernel-eligible finite fields, plain lists
otherwise. Every canonical object (RREF basis, subspace, kernel) is
deterministic: same input, same bytes.
"""

from array import array

from semimat import _ffcore
from semimat.errors import (
    EmptyInput,
    MixedFieldError,
    NonMonicInput,
    ShapeMismatch,
    SingularMatrix,
)
from semimat.fields import FieldElement, embed_raw


def _tables(field):
    return field.kernel_tables() if field.is_finite else None


def _make_data(field, values):
    if _tables(field) is not None:
        return array("H", values)
    return list(values)


def _zero_data(field, size):
    if _tables(field) is not None:
        return array("H", bytes(2 * size))
    return [field.zero] * size


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable-by-convention exact matrix over a Field descriptor."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, nrows, ncols, data):
        if len(data) != nrows * ncols:
            raise ShapeMismatch("data length %d for %dx%d matrix"
                                % (len(data), nrows, ncols))
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data = data

    # -- construction --------------------------------------------------------

    @staticmethod
    def from_rows(field, rows):
        nrows = len(rows)
        if nrows == 0:
            raise EmptyInput("matrix needs at least one row")
        ncols = len(rows[0])
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise ShapeMismatch("ragged rows")
            for x in row:
                flat.append(field.coerce(x))
        return Matrix(field, nrows, ncols, _make_data(field, flat))

    @staticmethod
    def zero(field, nrows, ncols=None):
        if ncols is None:
            ncols = nrows
        return Matrix(field, nrows, ncols, _zero_data(field, nrows * ncols))

    @staticmethod
    def identity(field, n):
        data = _zero_data(field, n * n)
        for i in range(n):
            data[i * n + i] = field.one
        return Matrix(field, n, n, data)

    @staticmethod
    def scalar(field, n, value):
        return Matrix.scalar_raw(field, n, field.coerce(value))

    @staticmethod
    def scalar_raw(field, n, raw):
        data = _zero_data(field, n * n)
        for i in range(n):
            data[i * n + i] = raw
        return Matrix(field, n, n, data)

    def copy(self):
        return Matrix(self.field, self.nrows, self.ncols,
                      self.data[:] if isinstance(self.data, array) else list(self.data))

    # -- basic queries --------------------------------------------------------

    def entry(self, i, j):
        return FieldElement(self.field, self.data[i * self.ncols + j])

    def raw_entry(self, i, j):
        return self.data[i * self.ncols + j]

    def row_raw(self, i):
        return list(self.data[i * self.ncols:(i + 1) * self.ncols])

    def col_raw(self, j):
        return [self.data[i * self.ncols + j] for i in range(self.nrows)]

    def is_zero(self):
        zero = self.field.zero
        return all(x == zero for x in self.data)

    def is_square(self):
        return self.nrows == self.ncols

    def is_identity(self):
        if not self.is_square():
            return False
        f = self.field
        n = self.ncols
        return all(self.data[i * n + j] == (f.one if i == j else f.zero)
                   for i in range(n) for j in range(n))

    def is_scalar(self):
        if not self.is_square():
            return False
        n = self.ncols
        zero = self.field.zero
        c = self.data[0]
        for i in range(n):
            for j in range(n):
                v = self.data[i * n + j]
                if i == j:
                    if v != c:
                        return False
                elif v != zero:
                    return False
        return True

    def trace(self):
        if not self.is_square():
            raise ShapeMismatch("trace of a non-square matrix")
        f = self.field
        acc = f.zero
        for i in range(self.nrows):
            acc = f.add(acc, self.data[i * self.ncols + i])
        return FieldElement(f, acc)

    def key(self):
        """Hashable canonical identity of this matrix (within its field)."""
        if isinstance(self.data, array):
            return (self.nrows, self.ncols, self.data.tobytes())
        return (self.nrows, self.ncols, tuple(self.data))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash((self.field, self.key()))

    # -- arithmetic -----------------------------------------------------------

    def _check_same(self, other):
        if self.field != other.field:
            raise MixedFieldError("matrices over %s and %s"
                                  % (self.field.spec_string(),
                                     other.field.spec_string()))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeMismatch("adding %dx%d to %dx%d"
                                % (other.nrows, other.ncols, self.nrows, self.ncols))
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      _make_data(f, (f.add(a, b) for a, b in zip(self.data, other.data))))

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      _make_data(f, (f.neg(a) for a in self.data)))

    def scaled(self, c):
        return self.scaled_raw(self.field.coerce(c))

    def scaled_raw(self, raw):
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      _make_data(f, (f.mul(raw, a) for a in self.data)))

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other)
        if self.ncols != other.nrows:
            raise ShapeMismatch("multiplying %dx%d by %dx%d"
                                % (self.nrows, self.ncols, other.nrows, other.ncols))
        f = self.field
        n, k, m = self.nrows, self.ncols, other.ncols
        tabs = _tables(f)
        if tabs is not None:
            add, mul, neg, inv = tabs
            out = array("H", bytes(2 * n * m))
            _ffcore.matmul(n, k, m, self.data, other.data, f.q, add, mul, out)
            return Matrix(f, n, m, out)
        out = _zero_data(f, n * m)
        for i in range(n):
            ik = i * k
            im = i * m
            for t in range(k):
                a = self.data[ik + t]
                if a == f.zero:
                    continue
                tm = t * m
                for j in range(m):
                    b = other.data[tm + j]
                    if b != f.zero:
                        out[im + j] = f.add(out[im + j], f.mul(a, b))
        return Matrix(f, n, m, out)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.__matmul__(other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def __pow__(self, e):
        if not self.is_square():
            raise ShapeMismatch("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        acc = Matrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                acc = acc @ base
            e >>= 1
            if e:
                base = base @ base
        return acc

    def transpose(self):
        f = self.field
        n, m = self.nrows, self.ncols
        out = _zero_data(f, n * m)
        for i in range(n):
            for j in range(m):
                out[j * n + i] = self.data[i * m + j]
        return Matrix(f, m, n, out)

    def matvec(self, vec):
        """Raw column vector image A*v."""
        f = self.field
        n, m = self.nrows, self.ncols
        if len(vec) != m:
            raise ShapeMismatch("matvec length %d for %dx%d" % (len(vec), n, m))
        tabs = _tables(f)
        if tabs is not None:
            add, mul, neg, inv = tabs
            col = vec if isinstance(vec, array) else array("H", vec)
            out = array("H", bytes(2 * n))
            _ffcore.matmul(n, m, 1, self.data, col, f.q, add, mul, out)
            return list(out)
        out = [f.zero] * n
        for i in range(n):
            acc = f.zero
            base = i * m
            for t in range(m):
                a = self.data[base + t]
                if a != f.zero and vec[t] != f.zero:
                    acc = f.add(acc, f.mul(a, vec[t]))
            out[i] = acc
        return out

    # -- elimination ----------------------------------------------------------

    def rref(self):
        """(reduced-row-echelon Matrix, pivot column list)."""
        f = self.field
        n, m = self.nrows, self.ncols
        tabs = _tables(f)
        if tabs is not None:
            add, mul, neg, inv = tabs
            work = self.data[:]
            pivots = _ffcore.rref(n, m, work, f.q, add, mul, neg, inv)
            return Matrix(f, n, m, work), pivots
        work = list(self.data)
        pivots = _generic_rref(f, n, m, work)
        return Matrix(f, n, m, work), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Right kernel {v : A v = 0} as a canonical Subspace."""
        f = self.field
        red, pivots = self.rref()
        m = self.ncols
        pivot_set = set(pivots)
        vectors = []
        for free in range(m):
            if free in pivot_set:
                continue
            v = [f.zero] * m
            v[free] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.data[r * m + free])
            vectors.append(v)
        return Subspace.from_vectors(f, m, vectors)

    def inverse(self):
        if not self.is_square():
            raise ShapeMismatch("inverse of a non-square matrix")
        f = self.field
        n = self.nrows
        aug = _zero_data(f, n * 2 * n)
        for i in range(n):
            for j in range(n):
                aug[i * 2 * n + j] = self.data[i * n + j]
            aug[i * 2 * n + n + i] = f.one
        work = Matrix(f, n, 2 * n, aug)
        red, pivots = work.rref()
        if pivots != list(range(n)):
            raise SingularMatrix("matrix has rank %d < %d" % (len(pivots), n))
        out = _zero_data(f, n * n)
        for i in range(n):
            for j in range(n):
                out[i * n + j] = red.data[i * 2 * n + n + j]
        return Matrix(f, n, n, out)

    def embed(self, K):
        """Entrywise image in an extension field K along the supported tower."""
        F = self.field
        return Matrix(K, self.nrows, self.ncols,
                      _make_data(K, (embed_raw(F, K, x) for x in self.data)))

    # -- display / serialization ----------------------------------------------

    def to_strings(self):
        f = self.field
        return [[f.format(self.data[i * self.ncols + j]) for j in range(self.ncols)]
                for i in range(self.nrows)]

    @staticmethod
    def from_strings(field, rows):
        """Inverse of to_strings: parse formatted entries back to a matrix."""
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise ShapeMismatch("ragged rows")
            for s in row:
                flat.append(field.parse(s))
        return Matrix(field, nrows, ncols, _make_data(field, flat))

    def __str__(self):
        rows = self.to_strings()
        width = max((len(s) for row in rows for s in row), default=1)
        return "\n".join(" ".join(s.rjust(width) for s in row) for row in rows)

    def __repr__(self):
        return "Matrix(%s, %dx%d)" % (self.field.spec_string(), self.nrows, self.ncols)


def _generic_rref(f, nrows, ncols, mat):
    """In-place RREF over any field; returns pivot columns.

    Mirrors the kernel implementation exactly (same pivot choices) so
    canonical bases agree across backends.
    """
    pivots = []
    rank = 0
    zero = f.zero
    for col in range(ncols):
        prow = -1
        for r in range(rank, nrows):
            if mat[r * ncols + col] != zero:
                prow = r
                break
        if prow < 0:
            continue
        if prow != rank:
            pb, rb = prow * ncols, rank * ncols
            for j in range(col, ncols):
                mat[pb + j], mat[rb + j] = mat[rb + j], mat[pb + j]
        base = rank * ncols
        pv = mat[base + col]
        if pv != f.one:
            pinv = f.inv(pv)
            for j in range(col, ncols):
                mat[base + j] = f.mul(pinv, mat[base + j])
        for r in range(nrows):
            if r == rank:
                continue
            rb = r * ncols
            c = mat[rb + col]
            if c != zero:
                for j in range(col, ncols):
                    if mat[base + j] != zero:
                        mat[rb + j] = f.sub(mat[rb + j], f.mul(c, mat[base + j]))
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return pivots


# ---------------------------------------------------------------------------
# incremental echelon spans
# ---------------------------------------------------------------------------

class EchelonSpan:
    """Growing RREF span of raw row vectors of a fixed width.

    Rows are kept mutually reduced with pivot coefficient 1, stored in
    insertion order in one flat buffer; exports sort them by pivot column,
    which makes the exported basis canonical for the spanned subspace.
    """

    __slots__ = ("field", "width", "flat", "pivots", "_tabs")

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self._tabs = _tables(field)
        self.flat = array("H") if self._tabs is not None else []
        self.pivots = []

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, vec):
        """Residual of vec against the span (new buffer; vec unchanged)."""
        if self._tabs is not None:
            add, mul, neg, inv = self._tabs
            res = vec[:] if isinstance(vec, array) else array("H", vec)
            _ffcore.reduce_row(res, len(self.pivots), self.width, self.flat,
                               self.pivots, self.field.q, add, mul, neg)
            return res
        f = self.field
        res = list(vec)
        w = self.width
        zero = f.zero
        for r, piv in enumerate(self.pivots):
            c = res[piv]
            if c != zero:
                base = r * w
                for j in range(w):
                    rv = self.flat[base + j]
                    if rv != zero:
                        res[j] = f.sub(res[j], f.mul(c, rv))
        return res

    def reduce_with_coeffs(self, vec):
        """(residual, coefficients in insertion order)."""
        f = self.field
        res = list(vec)
        w = self.width
        zero = f.zero
        coeffs = [zero] * len(self.pivots)
        for r, piv in enumerate(self.pivots):
            c = res[piv]
            if c != zero:
                coeffs[r] = c
                base = r * w
                for j in range(w):
                    rv = self.flat[base + j]
                    if rv != zero:
                        res[j] = f.sub(res[j], f.mul(c, rv))
        return res, coeffs

    def contains(self, vec):
        zero = self.field.zero
        return all(x == zero for x in self.reduce(vec))

    def insert(self, vec):
        """Add vec to the span; True if the dimension grew."""
        res = self.reduce(vec)
        f = self.field
        zero = f.zero
        piv = -1
        for j in range(self.width):
            if res[j] != zero:
                piv = j
                break
        if piv < 0:
            return False
        c = res[piv]
        if c != f.one:
            cinv = f.inv(c)
            for j in range(piv, self.width):
                if res[j] != zero:
                    res[j] = f.mul(cinv, res[j])
        w = self.width
        for r in range(len(self.pivots)):
            c2 = self.flat[r * w + piv]
            if c2 != zero:
                base = r * w
                for j in range(piv, w):
                    rv = res[j]
                    if rv != zero:
                        self.flat[base + j] = f.sub(self.flat[base + j],
                                                    f.mul(c2, rv))
        self.flat.extend(res)
        self.pivots.append(piv)
        return True

    def row(self, r):
        w = self.width
        return list(self.flat[r * w:(r + 1) * w])

    def canonical_rows(self):
        """Rows sorted by pivot column: the canonical RREF basis."""
        order = sorted(range(len(self.pivots)), key=lambda r: self.pivots[r])
        return [self.row(r) for r in order], [self.pivots[r] for r in order]

    def coordinates(self, vec):
        """Coordinates of vec in the canonical basis; MixedFieldError-free,
        raises ValueError if vec is outside the span."""
        res, coeffs = self.reduce_with_coeffs(vec)
        zero = self.field.zero
        if any(x != zero for x in res):
            raise ValueError("vector outside the span")
        order = sorted(range(len(self.pivots)), key=lambda r: self.pivots[r])
        return [coeffs[r] for r in order]


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of F^ambient with its canonical RREF basis.

    basis_rows is a list of raw row vectors (possibly empty for the zero
    subspace), pivot-sorted with pivot coefficient 1 and zeros above and
    below every pivot. Equal subspaces have equal basis_rows.
    """

    __slots__ = ("field", "ambient", "basis_rows", "pivots")

    def __init__(self, field, ambient, basis_rows, pivots):
        self.field = field
        self.ambient = ambient
        self.basis_rows = basis_rows
        self.pivots = pivots

    @staticmethod
    def from_vectors(field, ambient, vectors):
        span = EchelonSpan(field, ambient)
        for v in vectors:
            span.insert(v)
        rows, pivots = span.canonical_rows()
        return Subspace(field, ambient, rows, pivots)

    @staticmethod
    def zero(field, ambient):
        return Subspace(field, ambient, [], [])

    @staticmethod
    def full(field, ambient):
        return Subspace.from_vectors(
            field, ambient,
            [[field.one if i == j else field.zero for j in range(ambient)]
             for i in range(ambient)])

    @property
    def dim(self):
        return len(self.basis_rows)

    def is_zero(self):
        return self.dim == 0

    def is_full(self):
        return self.dim == self.ambient

    def is_proper_nontrivial(self):
        return 0 < self.dim < self.ambient

    def _span(self):
        span = EchelonSpan(self.field, self.ambient)
        for row in self.basis_rows:
            span.insert(row)
        return span

    def contains_vector(self, vec):
        return self._span().contains(vec)

    def contains(self, other):
        span = self._span()
        return all(span.contains(row) for row in other.basis_rows)

    def intersect(self, other):
        """Zassenhaus-free intersection via the kernel of [A^T | -B^T]."""
        f = self.field
        n = self.ambient
        a, b = self.dim, other.dim
        if a == 0 or b == 0:
            return Subspace.zero(f, n)
        data = _zero_data(f, n * (a + b))
        for i in range(n):
            for r in range(a):
                data[i * (a + b) + r] = self.basis_rows[r][i]
            for r in range(b):
                data[i * (a + b) + a + r] = f.neg(other.basis_rows[r][i])
        stacked = Matrix(f, n, a + b, data)
        combos = stacked.kernel()
        vectors = []
        for row in combos.basis_rows:
            v = [f.zero] * n
            for r in range(a):
                c = row[r]
                if c != f.zero:
                    for j in range(n):
                        x = self.basis_rows[r][j]
                        if x != f.zero:
                            v[j] = f.add(v[j], f.mul(c, x))
            vectors.append(v)
        return Subspace.from_vectors(f, n, vectors)

    def add(self, other):
        return Subspace.from_vectors(self.field, self.ambient,
                                     self.basis_rows + other.basis_rows)

    def annihilator(self):
        """{x : v . x = 0 for all v in the subspace}."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        flat = []
        for row in self.basis_rows:
            flat.extend(row)
        return Matrix(self.field, self.dim, self.ambient,
                      _make_data(self.field, flat)).kernel()

    def is_invariant(self, mats):
        """Whether A v stays inside for every basis v and every A in mats."""
        span = self._span()
        for m in mats:
            for row in self.basis_rows:
                if not span.contains(m.matvec(row)):
                    return False
        return True

    def free_positions(self):
        pivot_set = set(self.pivots)
        return [j for j in range(self.ambient) if j not in pivot_set]

    def matrix(self):
        flat = []
        for row in self.basis_rows:
            flat.extend(row)
        if not flat:
            raise EmptyInput("zero subspace has no basis matrix")
        return Matrix(self.field, self.dim, self.ambient,
                      _make_data(self.field, flat))

    def key(self):
        """Total-order key: dimension, then flattened canonical basis."""
        f = self.field
        return (self.dim,
                tuple(f.sort_key(x) for row in self.basis_rows for x in row))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and self.basis_rows == other.basis_rows)

    def __hash__(self):
        return hash((self.field, self.ambient,
                     tuple(tuple(r) for r in self.basis_rows)))

    def __repr__(self):
        return "Subspace(dim %d of %s^%d)" % (self.dim, self.field.spec_string(),
                                              self.ambient)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Dense univariate polynomial, raw coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        zero = field.zero
        end = len(coeffs)
        while end > 0 and coeffs[end - 1] == zero:
            end -= 1
        self.field = field
        self.coeffs = list(coeffs[:end])

    @staticmethod
    def zero(field):
        return Polynomial(field, [])

    @staticmethod
    def one(field):
        return Polynomial(field, [field.one])

    @staticmethod
    def x(field):
        return Polynomial(field, [field.zero, field.one])

    @staticmethod
    def constant(field, c):
        return Polynomial(field, [field.coerce(c)])

    @staticmethod
    def from_roots(field, roots):
        out = Polynomial.one(field)
        for r in roots:
            out = out * Polynomial(field, [field.neg(r), field.one])
        return out

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def lead(self):
        if not self.coeffs:
            raise EmptyInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __add__(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Polynomial(f, out)

    def __neg__(self):
        f = self.field
        return Polynomial(f, [f.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Polynomial.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == f.zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b != f.zero:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, out)

    def scaled(self, c):
        return self.scaled_raw(self.field.coerce(c))

    def scaled_raw(self, raw):
        f = self.field
        return Polynomial(f, [f.mul(raw, x) for x in self.coeffs])

    def divmod(self, den):
        f = self.field
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        dd = den.degree()
        lead_inv = f.inv(den.coeffs[-1])
        if len(num) <= dd:
            return Polynomial.zero(f), Polynomial(f, num)
        quot = [f.zero] * (len(num) - dd)
        for i in range(len(num) - 1, dd - 1, -1):
            c = num[i]
            if c != f.zero:
                q = f.mul(c, lead_inv)
                quot[i - dd] = q
                for j in range(dd + 1):
                    if den.coeffs[j] != f.zero:
                        num[i - dd + j] = f.sub(num[i - dd + j],
                                                f.mul(q, den.coeffs[j]))
        return Polynomial(f, quot), Polynomial(f, num[:dd])

    def __floordiv__(self, den):
        return self.divmod(den)[0]

    def __mod__(self, den):
        return self.divmod(den)[1]

    def exact_div(self, den):
        q, r = self.divmod(den)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def monic(self):
        if self.is_zero():
            raise NonMonicInput("cannot normalize the zero polynomial")
        if self.is_monic():
            return self
        return self.scaled_raw(self.field.inv(self.coeffs[-1]))

    def derivative(self):
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(f.mul(f.from_int(i), self.coeffs[i]))
        return Polynomial(f, out)

    def evaluate(self, x_raw):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x_raw), c)
        return acc

    def evaluate_matrix(self, mat):
        f = self.field
        n = mat.nrows
        acc = Matrix.zero(f, n)
        for c in reversed(self.coeffs):
            acc = acc @ mat
            if c != f.zero:
                acc = acc + Matrix.scalar_raw(f, n, c)
        return acc

    def pow_mod(self, e, mod):
        f = self.field
        acc = Polynomial.one(f)
        base = self % mod
        while e:
            if e & 1:
                acc = (acc * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return acc

    def key(self):
        f = self.field
        return (self.degree(), tuple(f.sort_key(c) for c in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __str__(self):
        f = self.field
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c == f.zero:
                continue
            s = f.format(c)
            negative = s.startswith("-")
            if negative:
                s = s[1:]
            if e > 0:
                if s == "1":
                    s = ""
                elif "+" in s or "-" in s:
                    s = "(%s)" % s
                s += "x" if e == 1 else "x^%d" % e
            if not parts:
                parts.append(("-" if negative else "") + s)
            else:
                parts.append(("-" if negative else "+") + s)
        return "".join(parts)

    def __repr__(self):
        return "Polynomial(%s, %s)" % (self.field.spec_string(), self)


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------

def char_poly(mat):
    """det(xI - A) by fraction-free (Bareiss) elimination over F[x].

    Exact over any field; the intermediate divisions are exact because
    every working entry is a minor of the original polynomial matrix.
    """
    if not mat.is_square():
        raise ShapeMismatch("characteristic polynomial of a non-square matrix")
    f = mat.field
    n = mat.nrows
    work = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a = mat.data[i * n + j]
            if i == j:
                work[i][j] = Polynomial(f, [f.neg(a), f.one])
            else:
                work[i][j] = Polynomial(f, [f.neg(a)])
    sign = 1
    prev = Polynomial.one(f)
    for c in range(n - 1):
        prow = -1
        for r in range(c, n):
            if not work[r][c].is_zero():
                prow = r
                break
        if prow < 0:
            return Polynomial.zero(f)
        if prow != c:
            work[prow], work[c] = work[c], work[prow]
            sign = -sign
        pivot = work[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                num = work[i][j] * pivot - work[i][c] * work[c][j]
                work[i][j] = num.exact_div(prev)
            work[i][c] = Polynomial.zero(f)
        prev = pivot
    det = work[n - 1][n - 1]
    if sign < 0:
        det = det.scaled_raw(f.from_int(-1))
    if not det.is_monic():
        raise ArithmeticError("characteristic polynomial came out non-monic")
    return det


# ---------------------------------------------------------------------------
# splitting and factorization
# ---------------------------------------------------------------------------

class SplitResult:
    """Outcome of splits_with_roots.

    roots: [(raw root, multiplicity)] sorted by the field's canonical order.
    nonsplit: monic cofactor with no roots in the field (1 when f splits).
    """

    __slots__ = ("splits", "roots", "nonsplit")

    def __init__(self, splits, roots, nonsplit):
        self.splits = splits
        self.roots = roots
        self.nonsplit = nonsplit

    def __repr__(self):
        return "SplitResult(splits=%s, roots=%s)" % (self.splits, self.roots)


def splits_with_roots(poly):
    """Decide whether a nonzero polynomial splits into linear factors.

    Over GF(q) the decision uses x^q mod f by repeated squaring: the
    distinct linear part is gcd(f, x^q - x), and f splits exactly when
    dividing out gcds with that part exhausts it. Over Q the rational
    root theorem drives repeated root extraction. Roots always come back
    sorted with multiplicities; the non-split monic cofactor is reported.
    """
    f = poly.field
    if poly.is_zero():
        raise EmptyInput("the zero polynomial does not split or not-split")
    work = poly.monic() if not poly.is_monic() else poly
    if work.degree() == 0:
        return SplitResult(True, [], Polynomial.one(f))
    if f.is_finite:
        return _splits_gf(work)
    return _splits_q(work)


def _splits_gf(work):
    f = work.field
    q = f.q
    if work.degree() == 1:
        root = f.neg(work.coeffs[0])
        return SplitResult(True, [(root, 1)], Polynomial.one(f))
    xq = Polynomial.x(f).pow_mod(q, work)
    linear_part = work.gcd(xq - Polynomial.x(f))
    rem = work
    while rem.degree() > 0:
        g = rem.gcd(linear_part)
        if g.degree() == 0:
            break
        rem = rem.exact_div(g)
    splits = rem.degree() == 0
    roots = []
    if linear_part.degree() > 0:
        for cand in f.elements():
            if linear_part.evaluate(cand) == f.zero:
                mult = 0
                probe = work
                lin = Polynomial(f, [f.neg(cand), f.one])
                while True:
                    quot, r = probe.divmod(lin)
                    if not r.is_zero():
                        break
                    probe = quot
                    mult += 1
                roots.append((cand, mult))
                if len(roots) == linear_part.degree():
                    break
    roots.sort(key=lambda t: f.sort_key(t[0]))
    return SplitResult(splits, roots, rem.monic() if rem.degree() > 0
                       else Polynomial.one(f))


def _splits_q(work):
    from fractions import Fraction

    f = work.field
    roots = []
    rem = work
    # strip zero roots first
    zero_mult = 0
    while rem.degree() > 0 and rem.coeffs[0] == 0:
        rem = Polynomial(f, rem.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    while rem.degree() > 0:
        found = None
        for cand in _rational_root_candidates(rem):
            if rem.evaluate(cand) == 0:
                found = cand
                break
        if found is None:
            break
        mult = 0
        lin = Polynomial(f, [-found, Fraction(1)])
        while True:
            quot, r = rem.divmod(lin)
            if not r.is_zero():
                break
            rem = quot
            mult += 1
        roots.append((found, mult))
    roots.sort(key=lambda t: t[0])
    splits = rem.degree() == 0
    return SplitResult(splits, roots,
                       rem if rem.degree() > 0 else Polynomial.one(f))


def _rational_root_candidates(poly):
    """Sorted candidate roots of a monic rational polynomial (nonzero only)."""
    from fractions import Fraction

    lcm = 1
    for c in poly.coeffs:
        d = c.denominator
        g = _int_gcd(lcm, d)
        lcm = lcm // g * d
    ints = [int(c * lcm) for c in poly.coeffs]
    a0 = abs(ints[0])
    alead = abs(ints[-1])
    if a0 == 0:
        return []
    nums = _divisors(a0)
    dens = _divisors(alead)
    cands = set()
    for nu in nums:
        for de in dens:
            fr = Fraction(nu, de)
            cands.add(fr)
            cands.add(-fr)
    return sorted(cands)


def _int_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def is_triangularizable_single(mat):
    """A single matrix is triangularizable over its field iff its
    characteristic polynomial splits there."""
    return splits_with_roots(char_poly(mat)).splits


# -- full factorization over GF(q), used by the irreducibility engine --------

def factor_gf(poly):
    """Irreducible factorization over GF(q): [(monic irreducible, mult)].

    Distinct-degree splitting plus Cantor-Zassenhaus equal-degree
    refinement (trace maps in characteristic 2); multiplicities counted
    against the input and the product verified before returning. Output
    sorted by (degree, coefficient encodings), deterministic.
    """
    import random as _random

    f = poly.field
    if not f.is_finite:
        raise MixedFieldError("factor_gf needs a finite field")
    if poly.is_zero():
        raise EmptyInput("cannot factor the zero polynomial")
    work = poly.monic()
    if work.degree() == 0:
        return []
    rng = _random.Random(0x5EED)
    distinct = []
    rem = work
    while rem.degree() > 0:
        der = rem.derivative()
        if der.is_zero():
            rem = _pth_root(rem)
            continue
        squarefree = rem.exact_div(rem.gcd(der))
        for irr in _factor_squarefree(squarefree, rng):
            distinct.append(irr)
            while True:
                quot, r = rem.divmod(irr)
                if not r.is_zero():
                    break
                rem = quot
    out = []
    check = Polynomial.one(f)
    uniq = {}
    for irr in distinct:
        uniq[irr.key()] = irr
    for key in sorted(uniq):
        irr = uniq[key]
        mult = 0
        probe = work
        while True:
            quot, r = probe.divmod(irr)
            if not r.is_zero():
                break
            probe = quot
            mult += 1
        out.append((irr, mult))
        for _ in range(mult):
            check = check * irr
    if check != work:
        raise ArithmeticError("factorization check failed")
    return out


def _pth_root(poly):
    """Inverse Frobenius: G with G^p = poly, valid when poly' = 0."""
    f = poly.field
    p = f.p
    root_exp = p ** (f.m - 1)
    out = []
    for i, c in enumerate(poly.coeffs):
        if i % p == 0:
            out.append(f.pow(c, root_exp))
        elif c != f.zero:
            raise ArithmeticError("polynomial is not a p-th power")
    return Polynomial(f, out)


def _factor_squarefree(work, rng):
    """Irreducible factors of a squarefree monic polynomial over GF(q)."""
    f = work.field
    q = f.q
    out = []
    x = Polynomial.x(f)
    h = x
    v = work
    d = 0
    while v.degree() > 0:
        d += 1
        if d > v.degree() // 2:
            out.append(v.monic())
            break
        h = h.pow_mod(q, v)
        g = v.gcd(h - x)
        if g.degree() > 0:
            out.extend(_equal_degree_split(g, d, rng))
            v = v.exact_div(g)
            h = h % v if v.degree() > 0 else h
    return out


def _equal_degree_split(g, d, rng):
    """Split a product of distinct degree-d irreducibles (Cantor-Zassenhaus)."""
    f = g.field
    q = f.q
    out = []
    stack = [g.monic()]
    while stack:
        h = stack.pop()
        if h.degree() == d:
            out.append(h)
            continue
        while True:
            a = Polynomial(f, [f.random(rng) for _ in range(h.degree())])
            if a.degree() < 1:
                continue
            if f.p == 2:
                t = a % h
                acc = t
                for _ in range(d * f.m - 1):
                    t = (t * t) % h
                    acc = acc + t
                w = h.gcd(acc)
            else:
                e = (q ** d - 1) // 2
                b = a.pow_mod(e, h)
                w = h.gcd(b - Polynomial.one(f))
            if 0 < w.degree() < h.degree():
                stack.append(w)
                stack.append(h.exact_div(w))
                break
    return out


# ---------------------------------------------------------------------------
# random generation helpers (shared by tests, harnesses and benchmarks)
# ---------------------------------------------------------------------------

def random_matrix(field, nrows, ncols, rng):
    return Matrix(field, nrows, ncols,
                  _make_data(field, (field.random(rng)
                                     for _ in range(nrows * ncols))))

def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        if m.rank() == n:
            return m
