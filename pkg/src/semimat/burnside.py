"""Semigroup closures and checked theorem instances.

check_burnside tests one instance of the statement: for a semigroup
whose every element is triangularizable over F, irreducibility of the
natural module is equivalent to the generated algebra being all of
M_n(F). check_spectra_descent tests the descent statement: an
irreducible semigroup over K whose element spectra lie in a subfield F
generates, over F, an algebra similar to full M_n(F), and the similarity
is constructed explicitly.

Each check returns a TheoremReport with the status of every hypothesis
and conclusion and a combined verdict:

* "hypothesis_fails": a hypothesis is violated (with a witness); the
  theorem asserts nothing about the instance.
* "theorem_instance_verified": hypotheses hold and every conclusion was
  verified exactly.
* "incomplete": something could not be decided within the budget (capped
  closure, inconclusive irreducibility, exhausted similarity search).
* "counterexample_candidate": hypotheses verified, a conclusion failed
  its check; the report carries everything needed to replay the claim.

Reports serialize to deterministic dicts embedding the generators, so a
report can be re-verified from the file alone.
"""

import random

from semimat.errors import (
    EmptyInput,
    MixedFieldError,
    SearchExhausted,
    ShapeMismatch,
    UnsupportedTower,
)
from semimat.fields import GF, QQ, is_subfield, raw_in_subfield
from semimat.linalg import Matrix, char_poly, splits_with_roots
from semimat.algebra import algebra_closure, construct_similarity_to_full
from semimat.modstruct import find_invariant_subspace

DEFAULT_CAP = 10000
_SPOT_VERIFY_LIMIT = 256


class SemigroupClosure:
    """All products of the generators, collected breadth-first.

    elements keeps discovery order and is deduplicated exactly. complete
    is False when the cap was hit, in which case elements is only the
    part of the semigroup reached so far. When at most 256 elements were
    found, closedness is verified pairwise at construction.
    """

    __slots__ = ("field", "n", "generators", "elements", "complete", "cap")

    def __init__(self, generators, cap=DEFAULT_CAP):
        if not generators:
            raise EmptyInput("a semigroup needs at least one generator")
        field = generators[0].field
        n = generators[0].nrows
        for g in generators:
            if g.field != field:
                raise MixedFieldError("generators over mixed fields")
            if g.nrows != n or g.ncols != n:
                raise ShapeMismatch("generators must be square of one size")
        self.field = field
        self.n = n
        self.generators = list(generators)
        self.cap = cap
        seen = {}
        order = []
        for g in generators:
            k = g.key()
            if k not in seen:
                seen[k] = g
                order.append(g)
        complete = True
        i = 0
        while i < len(order):
            if len(order) > cap:
                complete = False
                break
            cur = order[i]
            for g in self.generators:
                for prod in (cur @ g, g @ cur):
                    k = prod.key()
                    if k not in seen:
                        seen[k] = prod
                        order.append(prod)
            i += 1
        if len(order) > cap:
            complete = False
            order = order[:cap]
        self.elements = order
        self.complete = complete
        if complete and len(order) <= _SPOT_VERIFY_LIMIT:
            if not self.verify_closed():
                raise ShapeMismatch("closure failed its own verification")

    def __len__(self):
        return len(self.elements)

    def verify_closed(self):
        """Pairwise products stay inside the element set."""
        if not self.complete:
            return False
        keys = {m.key() for m in self.elements}
        for a in self.elements:
            for b in self.elements:
                if (a @ b).key() not in keys:
                    return False
        return True


class TriangularizabilityScan:
    """Per-element triangularizability over the base field.

    status "holds" (every enumerated element's characteristic polynomial
    splits; closure complete), "fails" (witness element attached), or
    "unverified" (closure capped before a witness appeared).
    """

    __slots__ = ("status", "witness", "witness_index", "nonsplit_factor")

    def __init__(self, status, witness, witness_index, nonsplit_factor):
        self.status = status
        self.witness = witness
        self.witness_index = witness_index
        self.nonsplit_factor = nonsplit_factor


def all_elements_triangularizable(closure):
    for idx, m in enumerate(closure.elements):
        sr = splits_with_roots(char_poly(m))
        if not sr.splits:
            return TriangularizabilityScan("fails", m, idx, str(sr.nonsplit))
    if not closure.complete:
        return TriangularizabilityScan("unverified", None, None, None)
    return TriangularizabilityScan("holds", None, None, None)


def _spectra_in_subfield(closure, F):
    """Like the scan above, but requires all roots to lie in F embedded."""
    K = closure.field
    for idx, m in enumerate(closure.elements):
        sr = splits_with_roots(char_poly(m))
        if not sr.splits:
            return TriangularizabilityScan("fails", m, idx, str(sr.nonsplit))
        if not all(raw_in_subfield(K, F, r) for r, _ in sr.roots):
            return TriangularizabilityScan("fails", m, idx, None)
    if not closure.complete:
        return TriangularizabilityScan("unverified", None, None, None)
    return TriangularizabilityScan("holds", None, None, None)


class TheoremReport:
    """Checked hypotheses and conclusions of one theorem instance."""

    __slots__ = ("kind", "field", "subfield", "n", "generators",
                 "hypotheses", "conclusions", "verdict", "data", "parameters")

    def __init__(self, kind, field, subfield, n, generators, parameters):
        self.kind = kind
        self.field = field
        self.subfield = subfield
        self.n = n
        self.generators = generators
        self.hypotheses = []
        self.conclusions = []
        self.verdict = None
        self.data = {}
        self.parameters = parameters

    def add_hypothesis(self, name, status, detail=None):
        self.hypotheses.append(
            {"name": name, "status": status, "detail": detail})

    def add_conclusion(self, name, status, detail=None):
        self.conclusions.append(
            {"name": name, "status": status, "detail": detail})

    def settle(self):
        """Combine the item statuses into the overall verdict."""
        hyp = [h["status"] for h in self.hypotheses]
        con = [c["status"] for c in self.conclusions]
        if "fails" in hyp:
            self.verdict = "hypothesis_fails"
        elif "unverified" in hyp or "unverified" in con:
            self.verdict = "incomplete"
        elif "fails" in con:
            self.verdict = "counterexample_candidate"
        else:
            self.verdict = "theorem_instance_verified"
        return self.verdict

    def _field_dict(self, f):
        d = {"spec": f.spec_string(), "p": f.p, "m": f.m}
        if f.modulus is not None:
            d["modulus"] = list(f.modulus)
        return d

    def to_dict(self):
        out = {
            "kind": self.kind,
            "field": self._field_dict(self.field),
            "n": self.n,
            "generators": [g.to_strings() for g in self.generators],
            "hypotheses": self.hypotheses,
            "conclusions": self.conclusions,
            "verdict": self.verdict,
            "data": self.data,
            "parameters": self.parameters,
        }
        if self.subfield is not None:
            out["subfield"] = self._field_dict(self.subfield)
        return out


def _matrix_strings(m):
    return m.to_strings()


def check_burnside(generators, cap=DEFAULT_CAP, budget=64, seed=0,
                   method="auto"):
    """One instance of the triangularizable-semigroup equivalence.

    Hypothesis: every semigroup element is triangularizable over F.
    Conclusion checked: the module is irreducible exactly when the
    generated unital algebra has dimension n^2.
    """
    if not generators:
        raise EmptyInput("check_burnside needs at least one generator")
    field = generators[0].field
    n = generators[0].nrows
    report = TheoremReport("burnside", field, None, n, list(generators),
                           {"cap": cap, "budget": budget, "seed": seed,
                            "method": method})
    closure = SemigroupClosure(generators, cap=cap)
    report.data["semigroup_size"] = len(closure)
    report.data["semigroup_complete"] = closure.complete

    scan = all_elements_triangularizable(closure)
    if scan.status == "fails":
        report.add_hypothesis(
            "elements_triangularizable", "fails",
            {"element": _matrix_strings(scan.witness),
             "element_index": scan.witness_index,
             "nonsplit_factor": scan.nonsplit_factor})
    else:
        report.add_hypothesis("elements_triangularizable", scan.status)

    verdict = find_invariant_subspace(generators, method=method,
                                      budget=budget, seed=seed)
    alg = algebra_closure(generators, include_identity=True)
    report.data["algebra_dim"] = alg.dim
    report.data["irreducibility"] = verdict.status
    report.data["irreducibility_certificate"] = verdict.certificate
    if verdict.witness is not None:
        report.data["invariant_subspace"] = [
            [field.format(x) for x in row]
            for row in verdict.witness.basis_rows]

    if verdict.status == "inconclusive":
        report.add_conclusion("irreducible_iff_full_algebra", "unverified",
                              {"reason": "irreducibility undecided"})
    else:
        irred = verdict.status == "irreducible"
        full = alg.dim == n * n
        status = "holds" if irred == full else "fails"
        report.add_conclusion(
            "irreducible_iff_full_algebra", status,
            {"irreducible": irred, "algebra_dim": alg.dim,
             "full_dim": n * n})
    report.settle()
    return report


def check_spectra_descent(generators, subfield, cap=DEFAULT_CAP, budget=64,
                          seed=0, method="auto", similarity_budget=512):
    """One instance of the spectra-descent statement.

    Hypotheses: the semigroup is irreducible over K, and every element's
    spectrum lies (split, with all roots) in the embedded subfield F.
    Conclusions checked: the F-algebra of the generators has dimension
    n^2, a similarity P with P^-1 A P inside M_n(F) is constructed and
    verified entrywise, and element traces lie in F without vanishing
    identically.
    """
    if not generators:
        raise EmptyInput("check_spectra_descent needs a generator")
    K = generators[0].field
    n = generators[0].nrows
    F = subfield
    if not is_subfield(F, K):
        raise UnsupportedTower("%s is not a supported subfield of %s"
                               % (F.spec_string(), K.spec_string()))
    report = TheoremReport("descent", K, F, n, list(generators),
                           {"cap": cap, "budget": budget, "seed": seed,
                            "method": method,
                            "similarity_budget": similarity_budget})
    closure = SemigroupClosure(generators, cap=cap)
    report.data["semigroup_size"] = len(closure)
    report.data["semigroup_complete"] = closure.complete

    scan = _spectra_in_subfield(closure, F)
    if scan.status == "fails":
        detail = {"element": _matrix_strings(scan.witness),
                  "element_index": scan.witness_index}
        if scan.nonsplit_factor is not None:
            detail["nonsplit_factor"] = scan.nonsplit_factor
        else:
            detail["reason"] = "eigenvalue outside the subfield"
        report.add_hypothesis("spectra_in_subfield", "fails", detail)
    else:
        report.add_hypothesis("spectra_in_subfield", scan.status)

    verdict = find_invariant_subspace(generators, method=method,
                                      budget=budget, seed=seed)
    report.data["irreducibility_certificate"] = verdict.certificate
    if verdict.status == "reducible":
        report.add_hypothesis(
            "irreducible_over_field", "fails",
            {"invariant_subspace": [[K.format(x) for x in row]
                                    for row in verdict.witness.basis_rows]})
    elif verdict.status == "inconclusive":
        report.add_hypothesis("irreducible_over_field", "unverified")
    else:
        report.add_hypothesis("irreducible_over_field", "holds")

    alg_f = algebra_closure(generators, include_identity=True, coeff_field=F)
    report.data["subfield_algebra_dim"] = alg_f.dim
    full = alg_f.dim == n * n
    report.add_conclusion("subfield_algebra_full", "holds" if full else "fails",
                          {"dim": alg_f.dim, "expected": n * n})

    if full:
        try:
            sim = construct_similarity_to_full(alg_f, seed=seed,
                                               budget=similarity_budget)
        except SearchExhausted as exc:
            report.add_conclusion("similarity_constructed", "unverified",
                                  {"reason": str(exc)})
        else:
            ok = True
            Pinv = sim.P.inverse()
            for g in generators:
                conj = Pinv @ g @ sim.P
                if not all(raw_in_subfield(K, F, x) for x in conj.data):
                    ok = False
                    break
            report.add_conclusion("similarity_constructed",
                                  "holds" if ok else "fails",
                                  {"attempts": sim.attempts})
            report.data["similarity"] = sim.P.to_strings()
    else:
        report.add_conclusion("similarity_constructed", "fails",
                              {"reason": "algebra not full"})

    traces_ok = True
    trace_nonzero = False
    for m in closure.elements:
        tr = m.trace().raw
        if not raw_in_subfield(K, F, tr):
            traces_ok = False
            break
        if tr != K.zero:
            trace_nonzero = True
    trace_status = "holds" if (traces_ok and trace_nonzero) else "fails"
    if traces_ok and not trace_nonzero and not closure.complete:
        trace_status = "unverified"
    report.add_conclusion("traces_in_subfield_nonzero", trace_status,
                          {"all_in_subfield": traces_ok,
                           "some_nonzero": trace_nonzero})
    report.settle()
    return report


def _field_from_dict(d):
    if d["p"] == 0:
        return QQ
    return GF(d["p"], d["m"], tuple(d["modulus"]) if "modulus" in d else None)


def reverify_report(report_dict):
    """Re-run a serialized report's check and compare the verdicts.

    Uses only data embedded in the dict: the field description, the
    generators, and the original parameters.
    """
    kind = report_dict["kind"]
    field = _field_from_dict(report_dict["field"])
    gens = [Matrix.from_strings(field, rows)
            for rows in report_dict["generators"]]
    params = report_dict["parameters"]
    if kind == "burnside":
        fresh = check_burnside(gens, cap=params["cap"],
                               budget=params["budget"], seed=params["seed"],
                               method=params.get("method", "auto"))
    elif kind == "descent":
        subfield = _field_from_dict(report_dict["subfield"])
        fresh = check_spectra_descent(
            gens, subfield, cap=params["cap"], budget=params["budget"],
            seed=params["seed"], method=params.get("method", "auto"),
            similarity_budget=params.get("similarity_budget", 512))
    else:
        return False
    return fresh.verdict == report_dict["verdict"]
