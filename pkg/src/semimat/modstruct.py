"""Invariant subspaces, composition series, and triangularization.

The irreducibility engine combines three certified strategies:

* a full algebra closure (dimension n^2 certifies irreducibility),
* a Norton-style test on candidate elements B: for an irreducible factor
  p of the characteristic polynomial with nullity(p(B)) = deg p, the
  module is irreducible exactly when one kernel vector spins to the full
  space and one transpose-kernel vector spins to the full dual space;
  any proper spin along the way is a verified invariant subspace,
* exhaustive enumeration of echelon subspaces over a finite field when
  the total count is small enough.

Over the rationals only linear factors and low-degree cofactors can be
certified irreducible without a full factoring routine, so the engine
reports inconclusive when the split strategies run dry; it never
guesses.
"""

import itertools
import random

from semimat.errors import (
    EmptyInput,
    MixedFieldError,
    NotTriangularizable,
    SearchExhausted,
    ShapeMismatch,
    StructureViolation,
    ChopIncomplete,
    UnsupportedField,
    ZeroVector,
)
from semimat.algebra import algebra_closure
from semimat.linalg import (
    EchelonSpan,
    Matrix,
    Polynomial,
    Subspace,
    char_poly,
    factor_gf,
    splits_with_roots,
    _make_data,
    _zero_data,
)

EXHAUSTIVE_LIMIT = 1 << 20


def _validate_family(mats, field, n):
    if mats:
        K = mats[0].field
        size = mats[0].nrows
        for m in mats:
            if m.field != K:
                raise MixedFieldError("family over mixed fields")
            if m.nrows != size or m.ncols != size:
                raise ShapeMismatch("family must be square matrices of one size")
        return K, size
    if field is None or n is None:
        raise EmptyInput("empty family needs field= and n=")
    return field, n


def spin(vec, mats, field=None, n=None):
    """Smallest subspace containing vec and invariant under mats.

    Worklist closure under every matrix; invariance of the result is
    rechecked unconditionally before returning.
    """
    field, n = _validate_family(mats, field, n if n is not None else len(vec))
    zero = field.zero
    if all(x == zero for x in vec):
        raise ZeroVector("cannot spin the zero vector")
    span = EchelonSpan(field, n)
    worklist = [list(vec)]
    span.insert(vec)
    while worklist:
        v = worklist.pop()
        for m in mats:
            w = m.matvec(v)
            if span.insert(w):
                worklist.append(w)
    rows, pivots = span.canonical_rows()
    sub = Subspace(field, n, rows, pivots)
    if not sub.is_invariant(mats):
        raise StructureViolation("spin produced a non-invariant subspace")
    return sub


class IrreducibilityVerdict:
    """Outcome of the invariant-subspace search.

    status is one of "irreducible", "reducible", "inconclusive". For a
    reducible verdict, witness is a proper nonzero invariant Subspace
    (invariance rechecked before the verdict is built). certificate is a
    plain dict that replay_certificate can re-verify from scratch.
    """

    __slots__ = ("status", "witness", "certificate", "attempts")

    def __init__(self, status, witness, certificate, attempts):
        self.status = status
        self.witness = witness
        self.certificate = certificate
        self.attempts = attempts

    @property
    def is_irreducible(self):
        return self.status == "irreducible"

    @property
    def is_reducible(self):
        return self.status == "reducible"

    def __repr__(self):
        extra = ""
        if self.witness is not None:
            extra = ", witness dim %d" % self.witness.dim
        return "IrreducibilityVerdict(%s%s)" % (self.status, extra)


def _format_matrix(mat):
    f = mat.field
    return [[f.format(mat.raw_entry(i, j)) for j in range(mat.ncols)]
            for i in range(mat.nrows)]


def _format_rows(field, rows):
    return [[field.format(x) for x in row] for row in rows]


def _reducible(mats, field, n, rows, cert):
    sub = Subspace.from_vectors(field, n, rows)
    if sub.dim == 0 or sub.dim == n:
        raise StructureViolation("witness candidate is not proper nonzero")
    if not sub.is_invariant(mats):
        raise StructureViolation("witness candidate is not invariant")
    cert["witness_rows"] = _format_rows(field, sub.basis_rows)
    return sub, cert


def _factor_candidates(cp):
    """(poly, certified_irreducible) pairs worth probing for kernels."""
    field = cp.field
    if field.is_finite:
        return [(p, True) for p, _ in factor_gf(cp)]
    sr = splits_with_roots(cp)
    out = [(Polynomial(field, [field.neg(r), field.one]), True)
           for r, _ in sr.roots]
    if sr.nonsplit is not None and sr.nonsplit.degree() >= 1:
        # no rational roots by construction, so degree 2 or 3 means
        # irreducible; higher degrees are usable only to hunt witnesses
        out.append((sr.nonsplit, sr.nonsplit.degree() in (2, 3)))
    return out


def find_invariant_subspace(mats, method="auto", budget=64, seed=0,
                            field=None, n=None):
    """Decide (ir)reducibility of the natural module of a matrix family.

    method "auto" runs the closure-dimension certificate, then Norton
    probes within the candidate budget, then exhaustive enumeration when
    the subspace count is at most 2^20; "norton" and "exhaustive" force a
    single strategy. budget counts random candidate elements tried after
    the algebra basis itself.
    """
    field, n = _validate_family(mats, field, n)
    if method not in ("auto", "norton", "exhaustive"):
        raise ValueError("unknown method %r" % (method,))
    if n == 1:
        return IrreducibilityVerdict(
            "irreducible", None, {"method": "dimension_one"}, 0)

    if method == "exhaustive":
        return _exhaustive_scan(mats, field, n)

    alg = algebra_closure(mats, include_identity=True, field=field, n=n)
    if alg.dim == n * n:
        return IrreducibilityVerdict(
            "irreducible", None,
            {"method": "full_algebra", "dimension": n * n}, 0)

    mats_t = [m.transpose() for m in mats]
    rng = random.Random(seed)
    attempts = 0

    def candidates():
        for b in alg.basis:
            yield b
        for _ in range(budget):
            coeffs = [field.random(rng) for _ in range(alg.dim)]
            yield alg.element_from_coords(coeffs)

    for B in candidates():
        if B.is_zero():
            continue
        attempts += 1
        outcome = _norton_probe(mats, mats_t, field, n, B)
        if outcome is not None:
            outcome.attempts = attempts
            return outcome

    if method == "auto" and field.is_finite:
        total = sum(_gaussian_binomial(n, k, field.q) for k in range(1, n))
        if total <= EXHAUSTIVE_LIMIT:
            verdict = _exhaustive_scan(mats, field, n)
            verdict.attempts = attempts
            return verdict

    return IrreducibilityVerdict(
        "inconclusive", None,
        {"method": "none", "budget": budget, "algebra_dim": alg.dim,
         "reason": "no decisive element within budget"}, attempts)


def _norton_probe(mats, mats_t, field, n, B):
    """Try one candidate element; verdict or None if it decides nothing."""
    cp = char_poly(B)
    for p, certified in _factor_candidates(cp):
        if p.degree() < 1:
            continue
        N = p.evaluate_matrix(B)
        W = N.kernel()
        if W.dim == 0:
            continue
        for w in W.basis_rows:
            sub = spin(w, mats, field=field, n=n)
            if 0 < sub.dim < n:
                witness, cert = _reducible(
                    mats, field, n, sub.basis_rows,
                    {"method": "spin", "element": _format_matrix(B),
                     "factor_coeffs": [field.format(c) for c in p.coeffs]})
                return IrreducibilityVerdict("reducible", witness, cert, 0)
        Wt = N.transpose().kernel()
        for w in Wt.basis_rows:
            sub = spin(w, mats_t, field=field, n=n)
            if 0 < sub.dim < n:
                witness, cert = _reducible(
                    mats, field, n, sub.annihilator().basis_rows,
                    {"method": "dual_spin", "element": _format_matrix(B),
                     "factor_coeffs": [field.format(c) for c in p.coeffs]})
                return IrreducibilityVerdict("reducible", witness, cert, 0)
        if certified and W.dim == p.degree():
            cert = {"method": "norton", "element": _format_matrix(B),
                    "factor_coeffs": [field.format(c) for c in p.coeffs],
                    "nullity": W.dim}
            return IrreducibilityVerdict("irreducible", None, cert, 0)
    return None


def _gaussian_binomial(n, k, q):
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _echelon_rows(field, n, pivots, values):
    rows = []
    vi = 0
    pivot_set = set(pivots)
    for r, piv in enumerate(pivots):
        row = [field.zero] * n
        row[piv] = field.one
        for c in range(piv + 1, n):
            if c not in pivot_set:
                row[c] = values[vi]
                vi += 1
        rows.append(row)
    return rows


def _exhaustive_scan(mats, field, n):
    """Enumerate every echelon subspace by dimension, lex order."""
    if not field.is_finite:
        raise UnsupportedField("exhaustive subspace enumeration needs a "
                               "finite field")
    total = sum(_gaussian_binomial(n, k, field.q) for k in range(1, n))
    if total > EXHAUSTIVE_LIMIT:
        raise SearchExhausted("subspace count %d exceeds the enumeration "
                              "limit" % total, total)
    elements = list(field.elements())
    checked = 0
    for k in range(1, n):
        for pivots in itertools.combinations(range(n), k):
            pivot_set = set(pivots)
            free = sum(1 for r, piv in enumerate(pivots)
                       for c in range(piv + 1, n) if c not in pivot_set)
            for values in itertools.product(elements, repeat=free):
                rows = _echelon_rows(field, n, pivots, values)
                checked += 1
                span = EchelonSpan(field, n)
                for row in rows:
                    span.insert(row)
                ok = True
                for m in mats:
                    for row in rows:
                        if not span.contains(m.matvec(row)):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    witness, cert = _reducible(
                        mats, field, n, rows,
                        {"method": "exhaustive", "subspaces_checked": checked})
                    return IrreducibilityVerdict("reducible", witness, cert, 0)
    return IrreducibilityVerdict(
        "irreducible", None,
        {"method": "exhaustive", "subspaces_checked": checked}, 0)


def replay_certificate(mats, verdict, field=None, n=None):
    """Re-verify a verdict's certificate from its serialized data alone."""
    field, n = _validate_family(mats, field, n)
    cert = verdict.certificate
    method = cert.get("method")
    if verdict.status == "inconclusive":
        return True
    if verdict.status == "reducible":
        rows = [[field.parse(s) for s in row] for row in cert["witness_rows"]]
        sub = Subspace.from_vectors(field, n, rows)
        return 0 < sub.dim < n and sub.is_invariant(mats)
    if method == "dimension_one":
        return n == 1
    if method == "full_algebra":
        alg = algebra_closure(mats, include_identity=True, field=field, n=n)
        return alg.dim == n * n == cert["dimension"]
    if method == "norton":
        flat = [field.parse(s) for row in cert["element"] for s in row]
        B = Matrix(field, n, n, _make_data(field, flat))
        coeffs = [field.parse(s) for s in cert["factor_coeffs"]]
        p = Polynomial(field, coeffs)
        N = p.evaluate_matrix(B)
        W = N.kernel()
        if W.dim != cert["nullity"] or W.dim != p.degree():
            return False
        mats_t = [m.transpose() for m in mats]
        primal = spin(W.basis_rows[0], mats, field=field, n=n)
        dual = spin(N.transpose().kernel().basis_rows[0], mats_t,
                    field=field, n=n)
        return primal.dim == n and dual.dim == n
    if method == "exhaustive":
        return _exhaustive_scan(mats, field, n).status == "irreducible"
    return False


# ---------------------------------------------------------------------------
# composition series
# ---------------------------------------------------------------------------

class CompositionFactor:
    """One chopped factor: its dimension, the induced action matrices, and
    the engine verdict certifying its irreducibility."""

    __slots__ = ("dim", "action", "verdict")

    def __init__(self, dim, action, verdict):
        self.dim = dim
        self.action = action
        self.verdict = verdict

    def __repr__(self):
        return "CompositionFactor(dim=%d)" % self.dim


class InvariantChain:
    """Strictly increasing invariant subspaces from zero to the full space,
    with the factor actions between consecutive terms."""

    __slots__ = ("field", "n", "subspaces", "factors")

    def __init__(self, field, n, subspaces, factors):
        self.field = field
        self.n = n
        self.subspaces = subspaces
        self.factors = factors

    @property
    def length(self):
        return len(self.factors)

    def dims(self):
        return [s.dim for s in self.subspaces]

    def verify(self, mats):
        """Recheck strict growth and invariance of every chain term."""
        if self.subspaces[0].dim != 0 or self.subspaces[-1].dim != self.n:
            return False
        for a, b in zip(self.subspaces, self.subspaces[1:]):
            if not (a.dim < b.dim and b.contains(a)):
                return False
        return all(s.is_invariant(mats) for s in self.subspaces)

    def __repr__(self):
        return "InvariantChain(dims %s)" % (self.dims(),)


def _gap_action(mats, field, n, lower, upper):
    """Action matrices on upper/lower plus the complement basis used.

    The complement is the span of upper's rows reduced modulo lower;
    reducing any vector of upper by lower lands in that complement, so
    its canonical coordinates are exactly the quotient coordinates.
    """
    lowspan = EchelonSpan(field, n)
    for row in lower.basis_rows:
        lowspan.insert(row)
    compspan = EchelonSpan(field, n)
    for row in upper.basis_rows:
        compspan.insert(lowspan.reduce(row))
    comp, _ = compspan.canonical_rows()
    k = len(comp)
    action = []
    for m in mats:
        data = _zero_data(field, k * k)
        for j, row in enumerate(comp):
            res = lowspan.reduce(m.matvec(row))
            try:
                coeffs = compspan.coordinates(res)
            except ValueError:
                raise StructureViolation("gap action escapes the chain term")
            for i in range(k):
                if coeffs[i] != field.zero:
                    data[i * k + j] = coeffs[i]
        action.append(Matrix(field, k, k, data))
    return action, comp


def composition_series(mats, method="auto", budget=64, seed=0,
                       field=None, n=None):
    """Chop the natural module into certified irreducible factors.

    Iteratively refines the chain [0, F^n]: the leftmost gap whose induced
    action is reducible is split by the lifted witness; gaps whose action
    is certified irreducible become factors. An inconclusive verdict on
    any gap raises ChopIncomplete carrying the partial chain.
    """
    field, n = _validate_family(mats, field, n)
    chain = [Subspace.zero(field, n), Subspace.full(field, n)]
    resolved = [None]
    while True:
        idx = next((i for i, v in enumerate(resolved) if v is None), -1)
        if idx < 0:
            break
        lower, upper = chain[idx], chain[idx + 1]
        action, comp = _gap_action(mats, field, n, lower, upper)
        k = len(comp)
        verdict = find_invariant_subspace(action, method=method,
                                          budget=budget, seed=seed,
                                          field=field, n=k)
        if verdict.status == "inconclusive":
            raise ChopIncomplete(
                "cannot certify a factor of dimension %d" % k,
                InvariantChain(field, n, list(chain),
                               [f for f in resolved if f]))
        if verdict.status == "irreducible":
            resolved[idx] = CompositionFactor(k, action, verdict)
            continue
        lifted = []
        for wrow in verdict.witness.basis_rows:
            vec = [field.zero] * n
            for c, crow in zip(wrow, comp):
                if c != field.zero:
                    for j in range(n):
                        if crow[j] != field.zero:
                            vec[j] = field.add(vec[j],
                                               field.mul(c, crow[j]))
            lifted.append(vec)
        middle = Subspace.from_vectors(
            field, n, list(lower.basis_rows) + lifted)
        if not (lower.dim < middle.dim < upper.dim):
            raise StructureViolation("lifted witness does not refine the "
                                     "chain strictly")
        if not middle.is_invariant(mats):
            raise StructureViolation("lifted witness is not invariant")
        chain.insert(idx + 1, middle)
        resolved.insert(idx, None)
        resolved[idx + 1] = None
    result = InvariantChain(field, n, chain, resolved)
    if not result.verify(mats):
        raise StructureViolation("assembled chain failed verification")
    return result


# ---------------------------------------------------------------------------
# simultaneous triangularization
# ---------------------------------------------------------------------------

class TriangularizationResult:
    """Invertible P, the triangular conjugates, and the invariant flag."""

    __slots__ = ("P", "triangular", "chain")

    def __init__(self, P, triangular, chain):
        self.P = P
        self.triangular = triangular
        self.chain = chain


def _is_upper_triangular(mat):
    f = mat.field
    return all(mat.raw_entry(i, j) == f.zero
               for i in range(mat.nrows) for j in range(i))


def _common_eigenvector(field, k, gens):
    """A vector that every generator scales, or None when none exists.

    Complete backtracking over each non-scalar generator's eigenvalues in
    the field (sorted); scalar generators constrain nothing.
    """
    nonscalar = [g for g in gens if not g.is_scalar()]
    if not nonscalar:
        return [field.one] + [field.zero] * (k - 1)

    def descend(space, idx):
        if space.dim == 0:
            return None
        if idx == len(nonscalar):
            return list(space.basis_rows[0])
        A = nonscalar[idx]
        for root, _ in splits_with_roots(char_poly(A)).roots:
            eig = (A - Matrix.scalar_raw(field, k, root)).kernel()
            found = descend(space.intersect(eig), idx + 1)
            if found is not None:
                return found
        return None

    return descend(Subspace.full(field, k), 0)


def _complete_basis(field, k, vec):
    """Invertible k x k matrix whose first column is vec."""
    span = EchelonSpan(field, k)
    span.insert(vec)
    cols = [list(vec)]
    for j in range(k):
        unit = [field.zero] * k
        unit[j] = field.one
        if span.insert(unit):
            cols.append(unit)
        if len(cols) == k:
            break
    data = _zero_data(field, k * k)
    for j, col in enumerate(cols):
        for i in range(k):
            data[i * k + j] = col[i]
    return Matrix(field, k, k, data)


def triangularize_family(mats, field=None, n=None):
    """Simultaneously triangularize a family, or prove it impossible.

    Splitting of every generator's characteristic polynomial is a
    necessary condition checked first (obstruction "nonsplit_factor").
    Then the common-eigenvector search runs on each nested quotient; a
    quotient without one is a proof of non-triangularizability because
    the search is complete over the field's eigenvalues (obstruction
    "no_common_eigenvector"). On success P is returned with its exact
    triangular conjugates and the invariant flag of column prefixes.
    """
    field, n = _validate_family(mats, field, n)
    for i, g in enumerate(mats):
        sr = splits_with_roots(char_poly(g))
        if not sr.splits:
            raise NotTriangularizable(
                "generator %d has a non-splitting characteristic factor %s"
                % (i, sr.nonsplit),
                {"kind": "nonsplit_factor", "generator": i,
                 "factor": str(sr.nonsplit)})
    P = Matrix.identity(field, n)
    current = [m.copy() for m in mats]
    for step in range(n):
        k = n - step
        blocks = [Matrix(field, k, k,
                         _zero_data(field, k * k)) for _ in current]
        for bi, m in enumerate(current):
            for i in range(k):
                for j in range(k):
                    blocks[bi].data[i * k + j] = m.raw_entry(step + i,
                                                             step + j)
        vec = _common_eigenvector(field, k, blocks)
        if vec is None:
            raise NotTriangularizable(
                "no common eigenvector on the quotient of dimension %d"
                % k,
                {"kind": "no_common_eigenvector", "block_dim": k,
                 "fixed_columns": step})
        T = _complete_basis(field, k, vec)
        ext = Matrix.identity(field, n)
        for i in range(k):
            for j in range(k):
                ext.data[(step + i) * n + (step + j)] = T.raw_entry(i, j)
        P = P @ ext
        ext_inv = ext.inverse()
        current = [ext_inv @ m @ ext for m in current]
    Pinv = P.inverse()
    triangular = [Pinv @ m @ P for m in mats]
    for t in triangular:
        if not _is_upper_triangular(t):
            raise StructureViolation("triangularization verification failed")
    chain = [Subspace.zero(field, n)]
    cols = [P.col_raw(j) for j in range(n)]
    for i in range(1, n + 1):
        sub = Subspace.from_vectors(field, n, cols[:i])
        if sub.dim != i or not sub.is_invariant(mats):
            raise StructureViolation("column prefix %d is not an invariant "
                                     "subspace" % i)
        chain.append(sub)
    return TriangularizationResult(P, triangular, chain)
