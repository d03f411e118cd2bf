"""Matrix algebra closures and their structure.

An AlgebraBasis is the F-span of matrices in M_n(K), closed under
multiplication, where F is either K itself or its prime subfield. The
canonical basis is the RREF of the flattened span, so equal algebras get
identical bases. Structure constants are cached at construction, which
doubles as the closedness verification.
"""

import random

from semimat.errors import (
    EmptyInput,
    MixedFieldError,
    SearchExhausted,
    ShapeMismatch,
    SingularMatrix,
    StructureViolation,
    UnsupportedTower,
)
from semimat.fields import (embed_raw, is_subfield, raw_in_subfield,
                            retract_raw)
from semimat.linalg import (
    EchelonSpan,
    Matrix,
    Polynomial,
    char_poly,
    splits_with_roots,
    _make_data,
    _zero_data,
)


def flatten_matrix(mat, F):
    """Flatten a K-matrix to raw F-coordinates (digit expansion for towers)."""
    K = mat.field
    if K == F:
        return list(mat.data)
    if not is_subfield(F, K):
        raise UnsupportedTower("cannot flatten %s-matrices over %s"
                               % (K.spec_string(), F.spec_string()))
    p, m = K.p, K.m
    out = []
    for raw in mat.data:
        for _ in range(m):
            out.append(raw % p)
            raw //= p
    return out


def unflatten_matrix(K, F, nrows, ncols, vec):
    if K == F:
        return Matrix(K, nrows, ncols, _make_data(K, vec))
    p, m = K.p, K.m
    data = []
    for i in range(nrows * ncols):
        raw = 0
        for s in range(m - 1, -1, -1):
            raw = raw * p + vec[i * m + s]
        data.append(raw)
    return Matrix(K, nrows, ncols, _make_data(K, data))


class AlgebraBasis:
    """Canonical basis of a multiplication-closed F-span inside M_n(K)."""

    __slots__ = ("matrix_field", "coeff_field", "n", "basis", "contains_identity",
                 "multiplication_closed", "_span", "_structure")

    def __init__(self, matrix_field, coeff_field, n, basis, span, structure,
                 contains_identity):
        self.matrix_field = matrix_field
        self.coeff_field = coeff_field
        self.n = n
        self.basis = basis
        self._span = span
        self._structure = structure
        self.contains_identity = contains_identity
        self.multiplication_closed = True

    @property
    def dim(self):
        return len(self.basis)

    def flatten(self, mat):
        return flatten_matrix(mat, self.coeff_field)

    def contains(self, mat):
        return self._span.contains(self.flatten(mat))

    def coordinates(self, mat):
        """Raw F-coordinates of mat in the canonical basis."""
        return self._span.coordinates(self.flatten(mat))

    def element_from_coords(self, coeffs):
        """Sum of coeffs[i] * basis[i] with raw F-coefficients."""
        K, F = self.matrix_field, self.coeff_field
        acc = Matrix.zero(K, self.n)
        for c, b in zip(coeffs, self.basis):
            if c != F.zero:
                acc = acc + b.scaled_raw(embed_raw(F, K, c))
        return acc

    def structure_constants(self):
        """structure[i][j] = coordinates of basis[i] @ basis[j]."""
        return self._structure

    def __repr__(self):
        return "AlgebraBasis(dim %d in M_%d(%s) over %s)" % (
            self.dim, self.n, self.matrix_field.spec_string(),
            self.coeff_field.spec_string())


def _finish_algebra(K, F, n, span):
    """Canonicalize a spanning worklist result and verify closedness."""
    rows, _ = span.canonical_rows()
    basis = [unflatten_matrix(K, F, n, n, row) for row in rows]
    canonical = EchelonSpan(F, span.width)
    for row in rows:
        canonical.insert(row)
    structure = []
    for i, bi in enumerate(basis):
        row_coords = []
        for j, bj in enumerate(basis):
            prod = bi @ bj
            try:
                coords = canonical.coordinates(flatten_matrix(prod, F))
            except ValueError:
                raise StructureViolation(
                    "span is not closed under multiplication "
                    "(basis %d times basis %d escapes)" % (i, j))
            row_coords.append(coords)
        structure.append(row_coords)
    ident = canonical.contains(flatten_matrix(Matrix.identity(K, n), F))
    return AlgebraBasis(K, F, n, basis, canonical, structure, ident)


def algebra_closure(generators, include_identity=True, coeff_field=None,
                    field=None, n=None):
    """Smallest multiplication-closed F-span containing the generators.

    Worklist closure: every newly independent element is multiplied
    against everything already collected, on both sides, until the span
    stabilizes; the result is canonicalized to its RREF basis. With an
    empty generator list, include_identity must be set and field/n given.
    """
    if generators:
        K = generators[0].field
        n = generators[0].nrows
        for g in generators:
            if g.field != K:
                raise MixedFieldError("generators over mixed fields")
            if g.nrows != n or g.ncols != n:
                raise ShapeMismatch("generators must be square of equal size")
    else:
        if not include_identity:
            raise EmptyInput("empty generator list without the identity")
        if field is None or n is None:
            raise EmptyInput("empty generator list needs field= and n=")
        K = field
    F = coeff_field if coeff_field is not None else K
    if not is_subfield(F, K):
        raise UnsupportedTower("coefficients %s are not a supported subfield "
                               "of %s" % (F.spec_string(), K.spec_string()))
    width = n * n * (K.m if F != K else 1)
    span = EchelonSpan(F, width)
    elems = []

    def try_insert(mat):
        if span.insert(flatten_matrix(mat, F)):
            elems.append(mat)

    if include_identity:
        try_insert(Matrix.identity(K, n))
    for g in generators:
        try_insert(g)
    i = 0
    while i < len(elems):
        mi = elems[i]
        snapshot = len(elems)
        for j in range(snapshot):
            try_insert(mi @ elems[j])
            if j != i:
                try_insert(elems[j] @ mi)
        i += 1
    return _finish_algebra(K, F, n, span)


def algebra_from_span(mats, coeff_field=None, field=None, n=None):
    """AlgebraBasis from matrices already spanning a closed algebra.

    Raises StructureViolation if the span turns out not to be closed.
    """
    if mats:
        K = mats[0].field
        n = mats[0].nrows
    else:
        if field is None or n is None:
            raise EmptyInput("empty span needs field= and n=")
        K = field
    F = coeff_field if coeff_field is not None else K
    width = n * n * (K.m if F != K else 1)
    span = EchelonSpan(F, width)
    for m in mats:
        span.insert(flatten_matrix(m, F))
    return _finish_algebra(K, F, n, span)


# ---------------------------------------------------------------------------
# centralizer and division degree
# ---------------------------------------------------------------------------

def _coordinate_matrices(K, F, n):
    """F-basis of M_n(K) in flatten order: E_pos * t^s."""
    out = []
    m = K.m if F != K else 1
    for pos in range(n * n):
        for s in range(m):
            data = _zero_data(K, n * n)
            # K.p encodes the digit polynomial t; t^s stays below q for s < m
            data[pos] = K.pow(K.p, s) if F != K else K.one
            out.append(Matrix(K, n, n, data))
    return out


def centralizer(algebra):
    """Matrices commuting with every basis element, as an AlgebraBasis.

    Solved as one stacked F-linear system: for the coordinate basis U of
    M_n(K) over F, the column of U is the flattening of U B - B U for
    every basis B.
    """
    if not algebra.contains_identity:
        raise StructureViolation("centralizer needs a unital algebra basis")
    K, F, n = algebra.matrix_field, algebra.coeff_field, algebra.n
    unknowns = _coordinate_matrices(K, F, n)
    width = len(unknowns)
    if algebra.dim == 0:
        return algebra_from_span([Matrix.identity(K, n)], coeff_field=F)
    rows_per = n * n * (K.m if F != K else 1)
    total_rows = rows_per * algebra.dim
    data = _zero_data(F, total_rows * width)
    for col, u in enumerate(unknowns):
        offset = 0
        for b in algebra.basis:
            img = flatten_matrix(u @ b - b @ u, F)
            for r, val in enumerate(img):
                if val != F.zero:
                    data[(offset + r) * width + col] = val
            offset += rows_per
    system = Matrix(F, total_rows, width, data)
    sols = system.kernel()
    mats = [unflatten_matrix(K, F, n, n, row) for row in sols.basis_rows]
    return algebra_from_span(mats, coeff_field=F, field=K, n=n)


class DivisionDegree:
    """Result of division_degree: r, the dimension consistency flag, and
    the centralizer basis it came from."""

    __slots__ = ("r", "dim_check", "centralizer")

    def __init__(self, r, dim_check, cent):
        self.r = r
        self.dim_check = dim_check
        self.centralizer = cent

    def __repr__(self):
        return "DivisionDegree(r=%d, dim_check=%s)" % (self.r, self.dim_check)


def division_degree(algebra, assume_irreducible=False):
    """Dimension of the commuting division algebra, via the centralizer.

    For an irreducible algebra the centralizer is a division algebra of
    some dimension r over F with dim A = n^2 / r and r | n; dim_check
    records whether those counts hold. With assume_irreducible set, a
    failed check raises StructureViolation instead.
    """
    if algebra.coeff_field != algebra.matrix_field:
        raise UnsupportedTower("division degree is defined over the matrix "
                               "field itself")
    cent = centralizer(algebra)
    r = cent.dim
    n = algebra.n
    ok = (r > 0 and n * n % r == 0 and algebra.dim * r == n * n and n % r == 0)
    if assume_irreducible and not ok:
        raise StructureViolation(
            "irreducible algebra violates the dimension count: "
            "dim=%d, r=%d, n=%d" % (algebra.dim, r, n))
    return DivisionDegree(r, ok, cent)


def find_min_rank_element(algebra, seed=0, attempts=200):
    """Smallest rank of a nonzero element seen in a random sample.

    A randomized cross-check of the division degree (the minimal rank of
    an irreducible algebra is n / r); not a definition of anything.
    """
    rng = random.Random(seed)
    F = algebra.coeff_field
    best = None
    for b in algebra.basis:
        if not b.is_zero():
            rk = b.rank()
            best = rk if best is None else min(best, rk)
    for _ in range(attempts):
        coeffs = [F.random(rng) for _ in range(algebra.dim)]
        el = algebra.element_from_coords(coeffs)
        if el.is_zero():
            continue
        rk = el.rank()
        best = rk if best is None else min(best, rk)
    return best


# ---------------------------------------------------------------------------
# left regular representation
# ---------------------------------------------------------------------------

def left_regular_representation(algebra):
    """d x d matrices over F for left multiplication by each basis element.

    Column j of the image of basis[i] holds the coordinates of
    basis[i] @ basis[j]. Multiplicativity is verified on all basis pairs.
    """
    F = algebra.coeff_field
    d = algebra.dim
    structure = algebra.structure_constants()
    images = []
    for i in range(d):
        data = _zero_data(F, d * d)
        for j in range(d):
            coords = structure[i][j]
            for k in range(d):
                if coords[k] != F.zero:
                    data[k * d + j] = coords[k]
        images.append(Matrix(F, d, d, data))
    for i in range(d):
        for j in range(d):
            lhs = images[i] @ images[j]
            rhs = Matrix.zero(F, d)
            for k, c in enumerate(structure[i][j]):
                if c != F.zero:
                    rhs = rhs + images[k].scaled_raw(c)
            if lhs != rhs:
                raise StructureViolation(
                    "left regular representation is not multiplicative "
                    "on basis pair (%d, %d)" % (i, j))
    return images


# ---------------------------------------------------------------------------
# similarity to the full matrix algebra
# ---------------------------------------------------------------------------

class SimilarityResult:
    """P and the matrix-unit system transporting the algebra to M_n(F).

    units[i][j] are elements of the algebra with units[i][j] @ units[k][l]
    = delta_jk units[i][l] and sum units[i][i] = I; conjugation by P sends
    units[i][j] to the standard matrix unit E_ij.
    """

    __slots__ = ("P", "units", "attempts", "seed_element")

    def __init__(self, P, units, attempts, seed_element):
        self.P = P
        self.units = units
        self.attempts = attempts
        self.seed_element = seed_element


def construct_similarity_to_full(algebra, seed=0, budget=512):
    """Build P with P^-1 (algebra) P = M_n(F) embedded in M_n(K).

    Requires a unital algebra of full F-dimension n^2 whose elements are
    K-matrices. The search scans basis elements and then seeded random
    F-combinations for an element S whose characteristic polynomial has a
    simple root in the embedded subfield; the complementary cofactor
    evaluated at S gives a rank-one idempotent of the algebra, and a full
    matrix-unit system is grown from it through the algebra basis. P's
    columns are the images of a vector spanning the idempotent's range.
    Every claimed identity is verified exactly before the result is
    returned; SearchExhausted carries the attempt count when no candidate
    leads to a verified system within budget.
    """
    K, F, n = algebra.matrix_field, algebra.coeff_field, algebra.n
    if algebra.dim != n * n:
        raise StructureViolation("similarity needs full dimension n^2, got %d"
                                 % algebra.dim)
    if not algebra.contains_identity:
        raise StructureViolation("similarity needs a unital algebra")
    rng = random.Random(seed)
    attempts = 0

    def candidates():
        for b in algebra.basis:
            yield b
        for _ in range(budget):
            coeffs = [F.random(rng) for _ in range(algebra.dim)]
            yield algebra.element_from_coords(coeffs)

    for S in candidates():
        attempts += 1
        e = _spectral_idempotent(algebra, S)
        if e is None:
            continue
        result = _grow_units(algebra, e, S, attempts)
        if result is not None:
            return result
    raise SearchExhausted("no element led to a verified matrix-unit system "
                          "after %d candidates" % attempts, attempts)


def _spectral_idempotent(algebra, S):
    """Rank-one idempotent from a simple subfield eigenvalue of S.

    When the characteristic polynomial of S factors as (x - r) q(x) with
    q(r) != 0 and r in the embedded subfield, q(S)/q(r) projects onto the
    one-dimensional r-eigenspace and lies in the algebra. Returns None
    when S has no usable eigenvalue or the projector fails a check.
    """
    K, F = algebra.matrix_field, algebra.coeff_field
    cp = char_poly(S)
    for r, mult in splits_with_roots(cp).roots:
        if mult != 1 or not raw_in_subfield(K, F, r):
            continue
        q, rem = cp.divmod(Polynomial(K, [K.neg(r), K.one]))
        if not rem.is_zero():
            continue
        qr = q.evaluate(r)
        if qr == K.zero:
            continue
        e = q.evaluate_matrix(S).scaled_raw(K.inv(qr))
        if (e @ e) != e or e.rank() != 1:
            continue
        if not algebra.contains(e):
            continue
        return e
    return None


def _pairing_scalar(e, pos, m):
    """Raw alpha with m = alpha e, or None when m is not a multiple of e."""
    K = e.field
    if m.is_zero():
        return K.zero
    alpha = K.div(m.data[pos], e.data[pos])
    if m != e.scaled_raw(alpha):
        return None
    return alpha


def _grow_units(algebra, e, S, attempts):
    """Matrix-unit system and change of basis seeded by a rank-one
    idempotent, or None when the growth or any verification fails.

    Column units b e are collected until their images of a range vector
    of e form a basis; row units are the e c covectors recombined by the
    inverse of the pairing matrix (e c) (b e) = alpha e, which makes
    row[j] col[k] = delta_jk e an identity. Every product relation, the
    identity sum, and the conjugation by P are still checked exactly.
    """
    K, F, n = algebra.matrix_field, algebra.coeff_field, algebra.n

    w1 = None
    for col in range(n):
        vec = e.col_raw(col)
        if any(x != K.zero for x in vec):
            w1 = vec
            break
    if w1 is None:
        return None

    # column units b e with the images b w1 forming a K-basis
    span = EchelonSpan(K, n)
    span.insert(w1)
    col_units = [e]
    for b in algebra.basis:
        if span.dim == n:
            break
        if span.insert(b.matvec(w1)):
            col_units.append(b @ e)
    if span.dim < n:
        return None

    # covectors e c whose pairing rows against the column units are
    # independent over F
    pos = next(k for k, val in enumerate(e.data) if val != K.zero)
    rowspan = EchelonSpan(F, n)
    covectors = []
    pairing_rows = []
    for c in algebra.basis:
        if len(covectors) == n:
            break
        v = e @ c
        if v.is_zero():
            continue
        row = []
        for k in range(n):
            alpha = _pairing_scalar(e, pos, v @ col_units[k])
            if alpha is None or not raw_in_subfield(K, F, alpha):
                row = None
                break
            row.append(retract_raw(K, F, alpha))
        if row is None:
            continue
        if rowspan.insert(list(row)):
            covectors.append(v)
            pairing_rows.append(row)
    if len(covectors) < n:
        return None

    # invert the pairing over F; row unit j is the G^-1 recombination
    G = Matrix(F, n, n, _make_data(F, [x for row in pairing_rows
                                       for x in row]))
    try:
        Ginv = G.inverse()
    except SingularMatrix:
        return None
    row_units = []
    for j in range(n):
        acc = Matrix.zero(K, n)
        for k in range(n):
            coeff = Ginv.raw_entry(j, k)
            if coeff != F.zero:
                acc = acc + covectors[k].scaled_raw(embed_raw(F, K, coeff))
        row_units.append(acc)
    for j in range(n):
        for k in range(n):
            expected = e if j == k else Matrix.zero(K, n)
            if row_units[j] @ col_units[k] != expected:
                return None

    units = [[col_units[i] @ row_units[j] for j in range(n)]
             for i in range(n)]

    zero = Matrix.zero(K, n)
    total = Matrix.zero(K, n)
    for i in range(n):
        total = total + units[i][i]
    if not total.is_identity():
        return None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    prod = units[i][j] @ units[k][l]
                    expected = units[i][l] if j == k else zero
                    if prod != expected:
                        return None

    cols = [units[j][0].matvec(w1) for j in range(n)]
    data = _zero_data(K, n * n)
    for j, colvec in enumerate(cols):
        for i in range(n):
            data[i * n + j] = colvec[i]
    P = Matrix(K, n, n, data)
    try:
        Pinv = P.inverse()
    except SingularMatrix:
        return None
    for i in range(n):
        for j in range(n):
            conj = Pinv @ units[i][j] @ P
            edata = _zero_data(K, n * n)
            edata[i * n + j] = K.one
            if conj != Matrix(K, n, n, edata):
                return None
    return SimilarityResult(P, units, attempts, S)
