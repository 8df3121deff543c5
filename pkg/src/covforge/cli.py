"""covforge command line.

Every subcommand takes --format text|json|csv.  Exit status: 0 on success,
1 when a computation fails, is refused as infeasible, or a check reports a
failure; 2 on bad flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd

from .binary import BinaryForm
from .exact import format_scalar, parse_poly

FORMATS = ("text", "json", "csv")


class CheckFailed(Exception):
    """A verification command ran to completion and found a failure."""

    def __init__(self, result):
        super().__init__("check failed")
        self.result = result


# -- input files ---------------------------------------------------------------------

def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_binary_form(path: str) -> BinaryForm:
    """Accepts {"cayley_coefficients": [...]}, {"monomial_coefficients": [...]}
    or {"poly": "<expanded polynomial in x1, x2>"}."""
    data = _read_json(path)
    if "cayley_coefficients" in data:
        return BinaryForm.from_json(data)
    if "monomial_coefficients" in data:
        return BinaryForm.from_monomial_coeffs([parse_poly(str(c)) for c in data["monomial_coefficients"]])
    if "poly" in data:
        return BinaryForm.from_poly(parse_poly(data["poly"]), "x", data.get("order"))
    raise ValueError("binary form file needs cayley_coefficients, monomial_coefficients or poly")


def load_nary_form(path: str, n: int):
    from .clebsch import NaryForm

    data = _read_json(path)
    if "coefficients" in data:
        G = NaryForm.from_json(data)
    elif "poly" in data:
        G = NaryForm.from_poly(parse_poly(data["poly"]), n, data.get("order"))
    else:
        raise ValueError("n-ary form file needs coefficients or poly")
    if G.n != n:
        raise ValueError(f"form has n = {G.n}, expected {n}")
    return G


# -- output --------------------------------------------------------------------------

def _csv_cell(v) -> str:
    s = "" if v is None else str(v).lower() if isinstance(v, bool) else str(v)
    return f'"{s}"' if ("," in s or '"' in s) else s


def _emit(result: dict, fmt: str, text: str, csv_rows=None) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2)
    if fmt == "csv":
        if csv_rows is None:
            csv_rows = [["key", "value"]] + [[k, v] for k, v in result.items()
                                             if not isinstance(v, (dict, list))]
        return "\n".join(",".join(_csv_cell(c) for c in row) for row in csv_rows)
    return text


def _covariant_text(phi) -> str:
    lines = [f"covariant of {phi.d}-ics: degree {phi.degree}, order {phi.order}"]
    lines += [f"phi_{k} = {c}" for k, c in enumerate(phi.coeffs)]
    return "\n".join(lines)


def _covariant_csv(phi) -> list:
    return [["k", "coefficient"]] + [[k, str(c)] for k, c in enumerate(phi.coeffs)]


def _form_text(F: BinaryForm) -> str:
    return str(F.to_poly())


# -- subcommands -----------------------------------------------------------------------

def cmd_hilbert(args):
    from .goettingen import evaluate_covariant, hilbert_covariant

    H = hilbert_covariant(args.r, args.d)
    if not args.eval:
        return H.to_json(), _covariant_text(H), _covariant_csv(H)
    F = load_binary_form(args.eval)
    val = evaluate_covariant(H, F)
    res = {"r": args.r, "d": args.d, "value": val.to_json(), "vanishes": val.is_zero()}
    text = f"Hilb_{args.r},{args.d}(F) = {_form_text(val)}\nvanishes: {str(val.is_zero()).lower()}"
    return res, text, None


def cmd_goettingen(args):
    from .covariants import evaluate_expression
    from .goettingen import goettingen_basic, goettingen_general

    if args.psi:
        psi = evaluate_expression(args.psi, args.d - 2)
        G = goettingen_general(psi, args.r, args.d)
    else:
        G = goettingen_basic(args.r, args.d)
    return G.to_json(), _covariant_text(G), _covariant_csv(G)


def cmd_check_theorem(args):
    from .goettingen import goettingen_basic, hilbert_source, kappa_scalar

    k = kappa_scalar(args.r, args.d)
    src = goettingen_basic(args.r, args.d).source
    h0 = hilbert_source(args.r, args.d)
    equal = src == h0.scale(k)
    res = {"r": args.r, "d": args.d, "equal": equal, "kappa": format_scalar(k)}
    text = f"source(Gott_{args.r},{args.d}) = kappa * h0: {str(equal).lower()}\nkappa = {format_scalar(k)}"
    if not equal:
        raise CheckFailed((res, text, None))
    return res, text, None


def cmd_kappa(args):
    from .goettingen import kappa_scalar

    k = format_scalar(kappa_scalar(args.r, args.d))
    return {"r": args.r, "d": args.d, "kappa": k}, k, None


def cmd_power_test(args):
    from .powers import not_a_power_json, perfect_power_decompose

    F = load_binary_form(args.form)
    if not F.is_rational():
        raise ValueError("power-test needs rational coefficients")
    dec = perfect_power_decompose(F, args.mu)
    if dec is None:
        return not_a_power_json(args.mu), f"not a {args.mu}-th power", None
    text = f"base: {_form_text(dec.base)}\nexponent: {args.mu}\nscalar: {format_scalar(dec.scalar)}"
    return dec.to_json(), text, None


def cmd_zeta(args):
    from .covariants import zeta

    z = zeta(args.d, args.m, args.q)
    return {"d": args.d, "m": args.m, "q": args.q, "zeta": z}, str(z), None


def cmd_ideal_dims(args):
    from .ideals import g_piece, ix_piece, j_piece

    e = gcd(args.r, args.d)
    which = [args.which] if args.which else ["j", "g", "ix"]
    dims = {}
    for w in which:
        if w == "j":
            dims["J"] = j_piece(args.r, args.d, args.degree).rank()
        elif w == "g":
            dims["g"] = g_piece(args.r, args.d, args.degree).rank()
        else:
            dims["IX"] = ix_piece(e, args.d, args.degree).rank()
    res = {"r": args.r, "d": args.d, "degree": args.degree, "e": e, "dims": dims}
    text = "\n".join(f"dim {k}_{args.degree} = {v}" for k, v in dims.items())
    rows = [["ideal", "degree", "dim"]] + [[k, args.degree, v] for k, v in dims.items()]
    return res, text, rows


def cmd_si_scan(args):
    from .ideals import saturation_scan

    rep = saturation_scan(args.r, args.d, args.max_degree)
    lines = [f"m  dim_J  dim_IX  equal"]
    lines += [f"{x.m}  {x.dim_J}  {x.dim_IX}  {str(x.equal).lower()}" for x in rep.rows]
    si = rep.candidate_si
    lines.append(f"SI({args.r},{args.d}) candidate: {si if si is not None else 'none'} "
                 f"(verified up to degree {args.max_degree})")
    rows = [line.split(",") for line in rep.to_csv().splitlines()]
    return rep.to_json(), "\n".join(lines), rows


def cmd_containment(args):
    from .ideals import ideal_containment

    ok = ideal_containment(args.r1, args.r2, args.d)
    res = {"r1": args.r1, "r2": args.r2, "d": args.d, "contains": ok}
    return res, f"J_{args.r1},{args.d} contains J_{args.r2},{args.d}: {str(ok).lower()}", None


def cmd_transfer_test(args):
    from .clebsch import transfer_vanishing_test

    G = load_nary_form(args.form, args.n)
    ok = transfer_vanishing_test(G, args.r)
    res = {"n": args.n, "r": args.r, "d": G.order, "vanishes": ok}
    return res, f"transferred Gott_{args.r},{G.order} vanishes: {str(ok).lower()}", None


def cmd_umbral(args):
    from .clebsch import parse_bracket, umbral_evaluate, vanishes_modulo_identical

    G = load_nary_form(args.form, args.n)
    if G.order != args.d:
        raise ValueError(f"form has order {G.order}, expected {args.d}")
    P = umbral_evaluate(parse_bracket(args.expr), G)
    zero = P.is_zero()
    mod = zero or vanishes_modulo_identical(P, args.n)
    res = {"expr": args.expr, "value": str(P), "zero": zero, "zero_mod_ux": mod}
    text = f"{P}\nzero: {str(zero).lower()}\nzero modulo u_x: {str(mod).lower()}"
    return res, text, None


def cmd_bitangent(args):
    from .clebsch import bitangent_system

    G = load_nary_form(args.form, 3)
    E = bitangent_system(G)
    res = {"equations": [e.to_json() for e in E]}
    text = "\n".join(f"E_{i + 1} = {_form_text(e)}" for i, e in enumerate(E))
    rows = [["equation", "k", "cayley_coefficient"]]
    rows += [[i + 1, k, str(c)] for i, e in enumerate(E) for k, c in enumerate(e.coeffs)]
    return res, text, rows


def cmd_verify(args):
    from .suites import run_suites

    results = run_suites([args.suite] if args.suite else None)
    res = {"checks": [c.to_json() for c in results], "all_ok": all(c.ok for c in results)}
    lines = []
    for c in results:
        tag = "PASS" if c.ok else "FAIL"
        extra = f"  [scalar {format_scalar(c.scalar)}]" if c.scalar is not None else ""
        lines.append(f"{tag}  {c.suite}: {c.name}{extra}")
    rows = [["suite", "name", "ok", "scalar"]]
    rows += [[c.suite, c.name, c.ok, None if c.scalar is None else format_scalar(c.scalar)] for c in results]
    out = (res, "\n".join(lines), rows)
    if not res["all_ok"]:
        raise CheckFailed(out)
    return out


# -- parser --------------------------------------------------------------------------

def _positive(name, lo=1):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"{name} must be >= {lo}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")

    p = argparse.ArgumentParser(prog="covforge", description="Hilbert and Goettingen covariants of binary forms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    def rd(s, rmin=1, dmin=2):
        s.add_argument("--r", type=_positive("r", rmin), required=True)
        s.add_argument("--d", type=_positive("d", dmin), required=True)

    s = add("hilbert", cmd_hilbert, "the Hilbert covariant Hilb_{r,d}")
    rd(s)
    s.add_argument("--eval", metavar="FORM_FILE")
    s = add("goettingen", cmd_goettingen, "Gott_{r,d}, or Gott_psi with --psi")
    rd(s, dmin=3)
    s.add_argument("--psi", metavar="EXPR", help="covariant of the order-(d-2) form, e.g. 'T(F,F,2)'")
    s = add("check-theorem-hgeq", cmd_check_theorem, "source(Gott) = kappa * source(Hilb)")
    rd(s, dmin=3)
    s = add("kappa", cmd_kappa, "the scalar kappa_{r,d}")
    rd(s, dmin=3)
    s = add("power-test", cmd_power_test, "decide whether a form is a mu-th power")
    s.add_argument("--mu", type=_positive("mu"), required=True)
    s.add_argument("--form", required=True, metavar="FILE")
    s = add("zeta", cmd_zeta, "dimension of degree-m, order-q covariants of d-ics")
    s.add_argument("--d", type=_positive("d"), required=True)
    s.add_argument("--m", type=_positive("m", 0), required=True)
    s.add_argument("--q", type=_positive("q", 0), required=True)
    s = add("ideal-dims", cmd_ideal_dims, "dimensions of graded pieces of J, g, I_X")
    rd(s)
    s.add_argument("--degree", type=_positive("degree", 0), required=True)
    s.add_argument("--which", choices=("j", "g", "ix"))
    s = add("si-scan", cmd_si_scan, "compare J and I_X degree by degree")
    rd(s)
    s.add_argument("--max-degree", type=_positive("max-degree"), required=True)
    s = add("containment", cmd_containment, "does J_{r1,d} contain J_{r2,d}")
    s.add_argument("--r1", type=_positive("r1"), required=True)
    s.add_argument("--r2", type=_positive("r2"), required=True)
    s.add_argument("--d", type=_positive("d", 2), required=True)
    s = add("transfer-test", cmd_transfer_test, "Clebsch-transferred Gott vanishing test")
    s.add_argument("--n", type=_positive("n", 2), required=True)
    s.add_argument("--r", type=_positive("r"), required=True)
    s.add_argument("--form", required=True, metavar="FILE")
    s = add("umbral", cmd_umbral, "evaluate a bracket expression on an n-ary form")
    s.add_argument("--n", type=_positive("n", 2), required=True)
    s.add_argument("--d", type=_positive("d"), required=True)
    s.add_argument("--expr", required=True)
    s.add_argument("--form", required=True, metavar="FILE")
    s = add("bitangent-system", cmd_bitangent, "the three sextics of the bitangent system")
    s.add_argument("--form", required=True, metavar="FILE")
    s = add("verify-identities", cmd_verify, "run named identity suites")
    s.add_argument("--suite", choices=tuple(SUITES))
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        res, text, rows = args.fn(args)
        code = 0
    except CheckFailed as exc:
        (res, text, rows), code = exc.result, 1
    except (ValueError, ArithmeticError, OSError, KeyError, RuntimeError) as exc:
        if args.format == "json":
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=stderr)
        else:
            print(f"error: {exc}", file=stderr)
        return 1
    print(_emit(res, args.format, text, rows), file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
