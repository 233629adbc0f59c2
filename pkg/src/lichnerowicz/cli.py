"""
Command line: spectra, dimensions, exact bases and verification suites.

    lichnerowicz spectrum --n 3 --p 0 --k-max 2 --format json
    lichnerowicz dims --n 3 --p 2 --k 2 --computed
    lichnerowicz basis --n 2 --p 1 --k 1 --space Hd0KerIr
    lichnerowicz verify --suite eigen --n 3 --p 2 --k-max 3

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 internal
assertion.  Output is deterministic; files are written atomically.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import harmonic, spectrum, verify
from .harmonic import Kind, RegimeError, SpaceTag

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2, 3

_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
_NULLABLE_INT = {"type": ["integer", "null"]}

SPECTRUM_SCHEMA = {
    "type": "object",
    "required": ["n", "p", "variant", "lines"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer"},
        "p": {"type": "integer"},
        "k_max": {"type": "integer"},
        "variant": {"enum": ["symmetric", "forms"]},
        "regime": {"enum": ["SymmetricN2", "SymmetricNge3", "Forms"]},
        "lines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["eigenvalue", "multiplicity", "contributors", "complete"],
                "properties": {
                    "eigenvalue": {"type": "integer"},
                    "multiplicity": {"type": "integer", "minimum": 1},
                    "complete": {"type": "boolean"},
                    "formula_multiplicity": _NULLABLE_INT,
                    "mismatch": {"type": "boolean"},
                    "formula_note": {"type": "string"},
                    "skipped": {"type": "array", "items": {"type": "string"}},
                    "relabelled": {"type": "array", "items": {"type": "string"}},
                    "contributors": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["kind", "k", "l", "q", "dim"],
                            "properties": {
                                "kind": {"enum": [k.value for k in Kind]},
                                "k": {"type": "integer"},
                                "l": _NULLABLE_INT,
                                "q": _NULLABLE_INT,
                                "dim": {"type": "integer", "minimum": 1},
                                "source": {"enum": ["closed", "computed"]},
                                "family": {"type": ["string", "null"]},
                            },
                        },
                    },
                },
            },
        },
    },
}

DIMS_SCHEMA = {
    "type": "object",
    "required": ["n", "p", "k", "rows"],
    "properties": {
        "n": {"type": "integer"}, "p": {"type": "integer"}, "k": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "closed", "computed", "match"],
                "properties": {
                    "kind": {"enum": [k.value for k in Kind]},
                    "closed": _NULLABLE_INT,
                    "computed": _NULLABLE_INT,
                    "match": {"type": ["boolean", "null"]},
                },
            },
        },
    },
}

BASIS_SCHEMA = {
    "type": "object",
    "required": ["tag", "dim", "basis"],
    "properties": {
        "tag": {"type": "object", "required": ["kind", "n", "p", "k"]},
        "dim": {"type": "integer"},
        "ambient": {"type": "integer"},
        "basis": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["index", "exponents", "coefficient"],
                    "properties": {
                        "index": {"type": "array", "items": {"type": "integer"}},
                        "exponents": {"type": "array", "items": {"type": "integer"}},
                        "coefficient": _RATIONAL,
                    },
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "params", "passed", "results"],
    "properties": {
        "suite": {"type": "string"},
        "passed": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check", "inputs", "verdict", "witness"],
                "properties": {"verdict": {"enum": ["pass", "fail"]}},
            },
        },
    },
}

VERIFY_SCHEMA = {"type": "object", "required": ["passed", "reports"],
                 "properties": {"passed": {"type": "boolean"},
                                "reports": {"type": "array", "items": REPORT_SCHEMA}}}

SPECTRUM_CSV_COLUMNS = ["eigenvalue", "multiplicity", "complete", "formula_multiplicity", "mismatch",
                        "contributors"]
DIMS_CSV_COLUMNS = ["kind", "closed", "computed", "match"]

SPACE_ALIASES = {
    "PolyFull": Kind.PolyFull, "Hd": Kind.Hdelta, "Hdelta": Kind.Hdelta,
    "Hd0": Kind.Hdelta0, "Hdelta0": Kind.Hdelta0,
    "Hd0KerDstar": Kind.Hdelta0KerDstar, "Hdelta0KerDstar": Kind.Hdelta0KerDstar,
    "Hd0KerIr": Kind.Hdelta0KerIr, "Hdelta0KerIr": Kind.Hdelta0KerIr,
    "FormsHk": Kind.FormsHk, "FormsKerIr": Kind.FormsKerIr, "FormsExact": Kind.FormsExact,
    "V": Kind.V, "W": Kind.W,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- documents ------------------------------------------------------------------------------


def spectrum_document(n, p, k_max, variant="symmetric", computed=False):
    if variant == "forms":
        lines = spectrum.forms_spectrum(n, p, k_max, computed)
        regime = spectrum.Regime.Forms
    elif n == 2:
        lines = spectrum.n2_spectrum(p, k_max)
        regime = spectrum.Regime.SymmetricN2
    else:
        lines = spectrum.sym_spectrum(n, p, k_max, computed)
        regime = spectrum.Regime.SymmetricNge3
    for line in lines:
        if not isinstance(line.eigenvalue, int):
            raise AssertionError("non-integer eigenvalue")
    return {"n": n, "p": p, "k_max": k_max, "variant": variant, "regime": str(regime),
            "lines": [line.to_dict() for line in lines]}


def dims_document(n, p, k, computed=False, forms=False):
    if forms:
        kinds = [Kind.FormsHk, Kind.FormsKerIr, Kind.FormsExact]
    else:
        kinds = [Kind.PolyFull, Kind.Hdelta, Kind.Hdelta0]
        if k <= p:
            kinds.append(Kind.Hdelta0KerDstar)
        if k >= p:
            kinds.append(Kind.Hdelta0KerIr)
    rows = []
    for kind in kinds:
        tag = SpaceTag(kind, n, p, k)
        closed = harmonic.dim_formula(tag)
        comp = harmonic.build_space(tag).dim if computed else None
        match = None if closed is None or comp is None else closed == comp
        rows.append({"kind": str(kind), "closed": closed, "computed": comp, "match": match})
    return {"n": n, "p": p, "k": k, "rows": rows}


def basis_document(tag):
    built = harmonic.build_space(tag)
    coords = built.coords
    basis = []
    for vec in built.subspace.basis:
        terms = []
        for i in sorted(vec):
            idx, e = coords.basis[i]
            terms.append({"index": list(idx), "exponents": list(e), "coefficient": rational(vec[i])})
        basis.append(terms)
    t = {"kind": str(tag.kind), "n": tag.n, "p": tag.p, "k": tag.k, "q": tag.q, "l": tag.l}
    return {"tag": t, "dim": built.dim, "ambient": coords.dim, "basis": basis}


# -- renderers ------------------------------------------------------------------------------


def _contrib_label(c):
    extra = f",q={c['q']},l={c['l']}" if c["q"] is not None else ""
    return f"{c['kind']}(k={c['k']}{extra}):{c['dim']}"


def render_spectrum(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SPECTRUM_CSV_COLUMNS)
        for line in doc["lines"]:
            w.writerow([line["eigenvalue"], line["multiplicity"], str(line["complete"]).lower(),
                        "" if line.get("formula_multiplicity") is None else line["formula_multiplicity"],
                        str(line.get("mismatch", False)).lower(),
                        ";".join(_contrib_label(c) for c in line["contributors"])])
        return buf.getvalue()
    out = [f"spectrum n={doc['n']} p={doc['p']} k_max={doc['k_max']} variant={doc['variant']} "
           f"regime={doc['regime']}"]
    with_formula = any("formula_multiplicity" in l for l in doc["lines"])
    head = f"{'eigenvalue':>10} {'mult':>6}"
    if with_formula:
        head += f" {'formula':>8} {'flag':>8}"
    out.append(head + "  contributors")
    for line in doc["lines"]:
        row = f"{line['eigenvalue']:>10} {line['multiplicity']:>6}"
        if with_formula:
            fm = line.get("formula_multiplicity")
            flag = "MISMATCH" if line.get("mismatch") else ""
            row += f" {'' if fm is None else fm:>8} {flag:>8}"
        row += "  " + " ".join(_contrib_label(c) for c in line["contributors"])
        if not line["complete"]:
            row += "  (possibly incomplete)"
        for key in ("relabelled", "skipped"):
            if line.get(key):
                row += f"  {key}: " + ", ".join(line[key])
        out.append(row)
    return "\n".join(out) + "\n"


def render_dims(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(DIMS_CSV_COLUMNS)
        for r in doc["rows"]:
            w.writerow(["" if r[c] is None else (str(r[c]).lower() if isinstance(r[c], bool) else r[c])
                        for c in DIMS_CSV_COLUMNS])
        return buf.getvalue()
    out = [f"dims n={doc['n']} p={doc['p']} k={doc['k']}", f"{'kind':<16} {'closed':>8} {'computed':>9} match"]
    for r in doc["rows"]:
        def cell(v):
            return "-" if v is None else str(v)
        out.append(f"{r['kind']:<16} {cell(r['closed']):>8} {cell(r['computed']):>9} {cell(r['match'])}")
    return "\n".join(out) + "\n"


def render_basis(doc, fmt, tag):
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vector", "index", "exponents", "coefficient"])
        for i, terms in enumerate(doc["basis"]):
            for t in terms:
                w.writerow([i, " ".join(map(str, t["index"])), " ".join(map(str, t["exponents"])),
                            t["coefficient"]])
        return buf.getvalue()
    built = harmonic.build_space(tag)
    out = [f"# {tag.label()} dim={built.dim}"]
    for i, T in enumerate(built.basis_tensors):
        out.append(f"[{i}] {T!r}")
    return "\n".join(out) + "\n"


# -- commands ---------------------------------------------------------------------------------


def _check_common(args):
    if args.n < 2:
        raise UsageError("n must be at least 2")
    if args.p < 0:
        raise UsageError("p must be non-negative")
    if getattr(args, "variant", None) == "forms" and args.p > args.n:
        raise UsageError("forms need p <= n")


def cmd_spectrum(args):
    _check_common(args)
    if args.k_max < 0:
        raise UsageError("k-max must be non-negative")
    doc = spectrum_document(args.n, args.p, args.k_max, args.variant, args.computed)
    return EXIT_OK, render_spectrum(doc, args.format)


def cmd_dims(args):
    _check_common(args)
    if args.k < 0:
        raise UsageError("k must be non-negative")
    doc = dims_document(args.n, args.p, args.k, args.computed, args.variant == "forms")
    bad = any(r["match"] is False for r in doc["rows"])
    return (EXIT_FAIL if bad else EXIT_OK), render_dims(doc, args.format)


def cmd_basis(args):
    _check_common(args)
    kind = SPACE_ALIASES.get(args.space)
    if kind is None:
        raise UsageError(f"unknown space {args.space!r}; choose from {', '.join(sorted(SPACE_ALIASES))}")
    try:
        if kind in (Kind.V, Kind.W):
            if args.q is None or args.l is None:
                raise UsageError("V and W need --q and --l")
            tag = SpaceTag(kind, args.n, args.p, args.k, args.q, args.l)
        else:
            tag = SpaceTag(kind, args.n, args.p, args.k)
    except RegimeError as exc:
        raise UsageError(str(exc))
    if args.k < 0:
        raise UsageError("k must be non-negative")
    if args.format == "cache":
        if kind not in harmonic.KERNEL_KINDS:
            raise UsageError("the cache format only covers kernel spaces")
        return EXIT_OK, harmonic.BasisCache.serialize(tag, harmonic.build_space(tag).subspace)
    return EXIT_OK, render_basis(basis_document(tag), args.format, tag)


def cmd_verify(args):
    reports = []
    suites = ["identities", "structural", "eigen"] if args.suite == "all" else [args.suite]
    for suite in suites:
        if suite == "identities":
            reports.append(verify.run_identity_suite(args.seed, args.trials))
        elif suite == "structural":
            reports.append(verify.run_structural_suite())
        elif suite == "eigen":
            if args.n is None or args.p is None:
                raise UsageError("the eigen suite needs --n and --p")
            _check_common(args)
            reports.append(verify.run_eigen_suite(args.n, args.p, args.k_max, args.variant == "forms"))
    passed = all(r.passed for r in reports)
    if args.format == "json":
        docs = [json.loads(r.to_json()) for r in reports]
        text = json.dumps({"passed": passed, "reports": docs}, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(r.to_text() for r in reports)
    return (EXIT_OK if passed else EXIT_FAIL), text


def build_parser():
    parser = _Parser(prog="lichnerowicz", description="Exact spectra of the Laplacian on tensors over spheres.")
    parser.add_argument("--cache-dir", help=f"basis cache directory (default: ${harmonic.CACHE_ENV})")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--variant", choices=["symmetric", "forms"], default="symmetric")
        p.add_argument("--out", help="write here (atomically) instead of standard output")
        p.add_argument("--computed", action="store_true", help="use nullspace dimensions")

    sp = sub.add_parser("spectrum", help="eigenvalues with multiplicities")
    common(sp)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    sp.set_defaults(func=cmd_spectrum)

    dp = sub.add_parser("dims", help="closed-form against computed dimensions")
    common(dp)
    dp.add_argument("--k", type=int, required=True)
    dp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    dp.set_defaults(func=cmd_dims)

    bp = sub.add_parser("basis", help="exact basis of a space")
    common(bp)
    bp.add_argument("--k", type=int, required=True)
    bp.add_argument("--space", required=True)
    bp.add_argument("--q", type=int)
    bp.add_argument("--l", type=int)
    bp.add_argument("--format", choices=["json", "csv", "text", "cache"], default="text")
    bp.set_defaults(func=cmd_basis)

    vp = sub.add_parser("verify", help="run a verification suite")
    vp.add_argument("--suite", choices=["identities", "structural", "eigen", "all"], default="identities")
    vp.add_argument("--n", type=int)
    vp.add_argument("--p", type=int)
    vp.add_argument("--k-max", type=int, default=3)
    vp.add_argument("--variant", choices=["symmetric", "forms"], default="symmetric")
    vp.add_argument("--seed", type=int, default=1)
    vp.add_argument("--trials", type=int, default=50)
    vp.add_argument("--format", choices=["json", "text"], default="text")
    vp.add_argument("--out")
    vp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_dir:
        harmonic.set_default_cache(args.cache_dir)
    try:
        code, text = args.func(args)
    except UsageError as exc:
        print(f"lichnerowicz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, ArithmeticError) as exc:
        print(f"lichnerowicz: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        try:
            harmonic.atomic_write(args.out, text)
        except OSError as exc:
            print(f"lichnerowicz: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
