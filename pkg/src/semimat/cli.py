"""Command line interface.

Subcommands operate on a family file describing a field and a list of
matrices:

    # lines starting with '#' are comments; '#' also starts a trailing comment
    field GF(4)
    subfield GF(2)        (optional, only meaningful for descent-check)
    matrix
    1 t
    t+1 0
    matrix
    0 1
    1 0

Entries are whitespace-separated field literals ("5/3" over Q, "t^2+1"
over GF(p^m), "1+2i-j+k/2" over H). "field H" switches to quaternion
matrices, which only quat-decompose accepts.

Exit codes: 0 definite result, 2 hypothesis or applicability failure
(theorem hypotheses violated, not triangularizable, n = 1 quaternion
decomposition), 3 incomplete or inconclusive, 4 usage or parse error,
5 counterexample candidate or internal verification failure.

--emit machine prints one deterministic JSON document (sorted keys, two
space indent, trailing newline, no timestamps) embedding the generators
so the report can be re-verified on its own.
"""

import argparse
import json
import sys

from semimat.errors import (
    ChopIncomplete,
    NotApplicable,
    NotTriangularizable,
    ParseError,
    SemimatError,
    StructureViolation,
)
from semimat.fields import QQ, field_from_spec, Quaternion
from semimat.linalg import Matrix, _make_data
from semimat.algebra import algebra_closure, division_degree
from semimat.modstruct import (
    composition_series,
    find_invariant_subspace,
    triangularize_family,
)
from semimat.burnside import (
    SemigroupClosure,
    check_burnside,
    check_spectra_descent,
)
from semimat.quat import QuaternionMatrix, nilpotent_span_decomposition

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_INCOMPLETE = 3
EXIT_USAGE = 4
EXIT_CANDIDATE = 5


class FamilyFile:
    """Parsed family file: the field, optional subfield, and matrices."""

    __slots__ = ("field_spec", "field", "subfield", "matrices",
                 "is_quaternion")

    def __init__(self, field_spec, field, subfield, matrices, is_quaternion):
        self.field_spec = field_spec
        self.field = field
        self.subfield = subfield
        self.matrices = matrices
        self.is_quaternion = is_quaternion


def _strip_comment(line):
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_family_file(text):
    """Parse the family file grammar; ParseError points at the token."""
    lines = []
    for ln, raw in enumerate(text.splitlines(), 1):
        stripped = _strip_comment(raw)
        if stripped.strip():
            lines.append((ln, stripped))
    idx = 0
    if idx >= len(lines):
        raise ParseError("empty family file", line=1, column=1)

    def fail(ln, col, token, why):
        raise ParseError(why, line=ln, column=col, token=token)

    ln, first = lines[idx]
    parts = first.split()
    if parts[0] != "field":
        fail(ln, first.index(parts[0]) + 1, parts[0],
             "expected a 'field' directive first")
    if len(parts) != 2:
        fail(ln, 1, first.strip(), "field directive takes one spec")
    spec = parts[1]
    idx += 1

    is_quaternion = spec == "H"
    field = None
    if not is_quaternion:
        try:
            field = field_from_spec(spec)
        except SemimatError as exc:
            fail(ln, first.index(spec) + 1, spec, str(exc))

    subfield = None
    if idx < len(lines):
        ln2, line2 = lines[idx]
        parts2 = line2.split()
        if parts2[0] == "subfield":
            if is_quaternion:
                fail(ln2, 1, "subfield",
                     "subfield is not meaningful over H")
            if len(parts2) != 2:
                fail(ln2, 1, line2.strip(), "subfield directive takes one spec")
            try:
                subfield = field_from_spec(parts2[1])
            except SemimatError as exc:
                fail(ln2, line2.index(parts2[1]) + 1, parts2[1], str(exc))
            idx += 1

    matrices = []
    while idx < len(lines):
        ln3, line3 = lines[idx]
        parts3 = line3.split()
        if parts3 != ["matrix"]:
            fail(ln3, line3.index(parts3[0]) + 1, parts3[0],
                 "expected a 'matrix' directive")
        idx += 1
        rows = []
        while idx < len(lines):
            ln4, line4 = lines[idx]
            if line4.split() and line4.split()[0] in ("matrix",):
                break
            rows.append((ln4, line4))
            idx += 1
        if not rows:
            fail(ln3, 1, "matrix", "matrix block has no rows")
        width = None
        parsed_rows = []
        for ln4, line4 in rows:
            entries = []
            col = 0
            for piece in line4.split():
                col = line4.index(piece, col)
                try:
                    if is_quaternion:
                        entries.append(Quaternion.parse(piece))
                    else:
                        entries.append(field.parse(piece))
                except (SemimatError, ValueError) as exc:
                    fail(ln4, col + 1, piece, "bad entry: %s" % exc)
                col += len(piece)
            if width is None:
                width = len(entries)
            elif len(entries) != width:
                fail(ln4, 1, line4.strip(),
                     "row width %d differs from %d" % (len(entries), width))
            parsed_rows.append(entries)
        if is_quaternion:
            matrices.append(QuaternionMatrix.from_rows(parsed_rows))
        else:
            flat = [x for row in parsed_rows for x in row]
            matrices.append(Matrix(field, len(parsed_rows), width,
                                   _make_data(field, flat)))
    return FamilyFile(spec, field, subfield, matrices, is_quaternion)


def _load_family(path, need_square=True):
    try:
        with open(path, "r") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc), line=0, column=0)
    fam = parse_family_file(text)
    if not fam.matrices:
        raise ParseError("family file has no matrix blocks", line=1, column=1)
    if need_square:
        for i, m in enumerate(fam.matrices):
            if m.nrows != m.ncols:
                raise ParseError("matrix %d is %dx%d, not square"
                                 % (i, m.nrows, m.ncols), line=0, column=0)
        sizes = {m.nrows for m in fam.matrices}
        if len(sizes) != 1:
            raise ParseError("matrices have mixed sizes %s"
                             % sorted(sizes), line=0, column=0)
    return fam


def _emit(args, payload, text_lines):
    if args.emit == "machine":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2))
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _field_dict(f):
    d = {"spec": f.spec_string(), "p": f.p, "m": f.m}
    if f.modulus is not None:
        d["modulus"] = list(f.modulus)
    return d


def _report_text(report):
    lines = ["kind: %s" % report.kind,
             "field: %s  n: %d" % (report.field.spec_string(), report.n)]
    if report.subfield is not None:
        lines.append("subfield: %s" % report.subfield.spec_string())
    lines.append("semigroup: %s elements%s" % (
        report.data.get("semigroup_size", "?"),
        "" if report.data.get("semigroup_complete") else " (capped)"))
    for h in report.hypotheses:
        lines.append("hypothesis %s: %s" % (h["name"], h["status"]))
    for c in report.conclusions:
        lines.append("conclusion %s: %s" % (c["name"], c["status"]))
    lines.append("verdict: %s" % report.verdict)
    return lines


def _verdict_exit(verdict):
    return {"theorem_instance_verified": EXIT_OK,
            "hypothesis_fails": EXIT_HYPOTHESIS,
            "incomplete": EXIT_INCOMPLETE,
            "counterexample_candidate": EXIT_CANDIDATE}[verdict]


def _cmd_analyze(args):
    fam = _load_family(args.family)
    if fam.is_quaternion:
        raise ParseError("analyze does not handle quaternion files; "
                         "use quat-decompose", line=0, column=0)
    gens = fam.matrices
    field = fam.field
    n = gens[0].nrows
    closure = SemigroupClosure(gens, cap=args.cap)
    verdict = find_invariant_subspace(gens, budget=args.budget,
                                      seed=args.seed)
    alg = algebra_closure(gens, include_identity=True)
    payload = {
        "command": "analyze",
        "field": _field_dict(field),
        "n": n,
        "generators": [g.to_strings() for g in gens],
        "semigroup_size": len(closure),
        "semigroup_complete": closure.complete,
        "irreducibility": verdict.status,
        "irreducibility_certificate": verdict.certificate,
        "algebra_dim": alg.dim,
    }
    text = ["field: %s  n: %d" % (field.spec_string(), n),
            "semigroup: %d elements%s" % (
                len(closure), "" if closure.complete else " (capped)"),
            "irreducibility: %s" % verdict.status,
            "algebra dimension: %d of %d" % (alg.dim, n * n)]
    if verdict.witness is not None:
        payload["invariant_subspace"] = [
            [field.format(x) for x in row]
            for row in verdict.witness.basis_rows]
        text.append("invariant subspace dimension: %d" % verdict.witness.dim)
    dd = division_degree(alg)
    payload["division_degree"] = dd.r
    payload["division_dim_check"] = dd.dim_check
    text.append("division degree r: %d (dim check %s)" % (dd.r, dd.dim_check))
    try:
        tri = triangularize_family(gens)
    except NotTriangularizable as exc:
        payload["triangularizable"] = False
        payload["obstruction"] = exc.obstruction
        text.append("triangularizable: no (%s)" % exc.obstruction["kind"])
    else:
        payload["triangularizable"] = True
        payload["triangularizing_matrix"] = tri.P.to_strings()
        text.append("triangularizable: yes")
    incomplete = verdict.status == "inconclusive"
    try:
        chain = composition_series(gens, budget=args.budget, seed=args.seed)
        payload["composition_dims"] = chain.dims()
        payload["composition_factors"] = [f.dim for f in chain.factors]
        text.append("composition series dims: %s" % chain.dims())
    except ChopIncomplete as exc:
        payload["composition_dims"] = exc.partial_chain.dims()
        payload["composition_incomplete"] = True
        text.append("composition series: incomplete at %s"
                    % exc.partial_chain.dims())
        incomplete = True
    if fam.subfield is not None:
        alg_f = algebra_closure(gens, include_identity=True,
                                coeff_field=fam.subfield)
        payload["subfield"] = _field_dict(fam.subfield)
        payload["subfield_algebra_dim"] = alg_f.dim
        text.append("subfield algebra dimension: %d" % alg_f.dim)
    _emit(args, payload, text)
    return EXIT_INCOMPLETE if incomplete else EXIT_OK


def _cmd_burnside(args):
    fam = _load_family(args.family)
    if fam.is_quaternion:
        raise ParseError("burnside-check does not handle quaternion files",
                         line=0, column=0)
    report = check_burnside(fam.matrices, cap=args.cap, budget=args.budget,
                            seed=args.seed)
    _emit(args, report.to_dict(), _report_text(report))
    return _verdict_exit(report.verdict)


def _cmd_descent(args):
    fam = _load_family(args.family)
    if fam.is_quaternion:
        raise ParseError("descent-check does not handle quaternion files",
                         line=0, column=0)
    if fam.subfield is None:
        raise ParseError("descent-check needs a 'subfield' directive",
                         line=0, column=0)
    report = check_spectra_descent(fam.matrices, fam.subfield, cap=args.cap,
                                   budget=args.budget, seed=args.seed)
    _emit(args, report.to_dict(), _report_text(report))
    return _verdict_exit(report.verdict)


def _cmd_triangularize(args):
    fam = _load_family(args.family)
    if fam.is_quaternion:
        raise ParseError("triangularize does not handle quaternion files",
                         line=0, column=0)
    gens = fam.matrices
    field = fam.field
    base = {
        "command": "triangularize",
        "field": _field_dict(field),
        "n": gens[0].nrows,
        "generators": [g.to_strings() for g in gens],
    }
    try:
        tri = triangularize_family(gens)
    except NotTriangularizable as exc:
        base["triangularizable"] = False
        base["obstruction"] = exc.obstruction
        _emit(args, base, ["triangularizable: no",
                           "obstruction: %s" % exc.obstruction])
        return EXIT_HYPOTHESIS
    base["triangularizable"] = True
    base["P"] = tri.P.to_strings()
    base["triangular"] = [t.to_strings() for t in tri.triangular]
    text = ["triangularizable: yes", "P:"]
    text.extend("  " + " ".join(row) for row in tri.P.to_strings())
    for k, t in enumerate(tri.triangular):
        text.append("triangular %d:" % k)
        text.extend("  " + " ".join(row) for row in t.to_strings())
    _emit(args, base, text)
    return EXIT_OK


def _cmd_chop(args):
    fam = _load_family(args.family)
    if fam.is_quaternion:
        raise ParseError("chop does not handle quaternion files",
                         line=0, column=0)
    gens = fam.matrices
    field = fam.field
    base = {
        "command": "chop",
        "field": _field_dict(field),
        "n": gens[0].nrows,
        "generators": [g.to_strings() for g in gens],
    }
    try:
        chain = composition_series(gens, budget=args.budget, seed=args.seed)
    except ChopIncomplete as exc:
        base["complete"] = False
        base["partial_dims"] = exc.partial_chain.dims()
        _emit(args, base, ["composition series incomplete",
                           "partial dims: %s" % exc.partial_chain.dims()])
        return EXIT_INCOMPLETE
    base["complete"] = True
    base["dims"] = chain.dims()
    base["factors"] = [
        {"dim": f.dim,
         "action": [m.to_strings() for m in f.action],
         "certificate": f.verdict.certificate}
        for f in chain.factors]
    base["subspaces"] = [
        [[field.format(x) for x in row] for row in s.basis_rows]
        for s in chain.subspaces]
    text = ["composition series dims: %s" % chain.dims(),
            "factor dims: %s" % [f.dim for f in chain.factors]]
    _emit(args, base, text)
    return EXIT_OK


def _cmd_quat(args):
    fam = _load_family(args.family)
    if not fam.is_quaternion:
        raise ParseError("quat-decompose needs a 'field H' family file",
                         line=0, column=0)
    results = []
    text = []
    for i, m in enumerate(fam.matrices):
        dec = nilpotent_span_decomposition(m)
        results.append({
            "matrix": m.to_strings(),
            "scalar": str(dec.scalar),
            "terms": [{"coefficient": str(c), "nilpotent": N.to_strings()}
                      for c, N in dec.terms],
        })
        text.append("matrix %d: scalar %s + %d square-zero terms"
                    % (i, dec.scalar, len(dec.terms)))
    payload = {"command": "quat-decompose", "n": fam.matrices[0].nrows,
               "decompositions": results}
    _emit(args, payload, text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semimat",
        description="Exact structure of matrix semigroups: irreducibility, "
                    "algebra closures, triangularization, and quaternion "
                    "nilpotent decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("family", help="family file path")
    common.add_argument("--emit", choices=("text", "machine"),
                        default="text", help="output format")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized searches")
    common.add_argument("--budget", type=int, default=64,
                        help="candidate budget for randomized searches")
    common.add_argument("--cap", type=int, default=10000,
                        help="semigroup closure size cap")
    sub.add_parser("analyze", parents=[common],
                   help="structural summary of a matrix family")
    sub.add_parser("burnside-check", parents=[common],
                   help="check one triangularizable-semigroup instance")
    sub.add_parser("descent-check", parents=[common],
                   help="check one spectra-descent instance")
    sub.add_parser("triangularize", parents=[common],
                   help="simultaneous triangularization")
    sub.add_parser("chop", parents=[common],
                   help="composition series of the natural module")
    sub.add_parser("quat-decompose", parents=[common],
                   help="nilpotent spanning decomposition over H")
    return parser


_DISPATCH = {
    "analyze": _cmd_analyze,
    "burnside-check": _cmd_burnside,
    "descent-check": _cmd_descent,
    "triangularize": _cmd_triangularize,
    "chop": _cmd_chop,
    "quat-decompose": _cmd_quat,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return _DISPATCH[args.command](args)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except NotApplicable as exc:
        print("not applicable: %s" % exc, file=sys.stderr)
        return EXIT_HYPOTHESIS
    except StructureViolation as exc:
        print("verification failure: %s" % exc, file=sys.stderr)
        return EXIT_CANDIDATE
    except SemimatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
