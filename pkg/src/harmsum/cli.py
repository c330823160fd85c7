"""Command-line front end.

    harmsum eval "S[1,1,1,1,1,1](7)"
    harmsum verify --section 5 --N 1..12 --digits 50
    harmsum basis --weight 6
    harmsum continue 2,1,1,1,1 --N 2.5,3.5+1j
    harmsum asym --z 40

Exit status: 0 success, 1 a verification failed, 2 usage error,
3 numerically inconclusive.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import mp

from . import __version__
from . import expr as E

SCHEMA = "harmsum.cli/1"
DIGITS_ENV = "HARMSUM_DIGITS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------


def _digits(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 20 <= d <= 200:
        raise argparse.ArgumentTypeError("digits must be between 20 and 200")
    return d


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return 30
    try:
        return _digits(raw)
    except argparse.ArgumentTypeError as e:
        raise UsageError(f"{DIGITS_ENV}: {e}") from None


def parse_point(text: str):
    """An argument value: integer, rational p/q, decimal or complex (``3.5+1j``)."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise UsageError(f"bad argument value {text!r}") from None


def parse_points(text: str) -> list:
    """``a..b`` (integers, inclusive) or a comma-separated list."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"range bounds must be integers: {text!r}") from None
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [parse_point(p) for p in text.split(",") if p.strip()]


def _numeric(p):
    if isinstance(p, Fraction):
        return p if p.denominator != 1 else int(p)
    if isinstance(p, complex):
        return mpmath.mpc(p.real, p.imag) if p.imag else mpmath.mpf(p.real)
    return p


def _fmt(v, digits: int) -> str:
    if isinstance(v, (Fraction, int)):
        return str(v)
    return mpmath.nstr(v, digits, strip_zeros=False)


def _eta(branch: str | None):
    return None if branch is None else (1 if branch == "even" else -1)


# -- verbs ------------------------------------------------------------------------


def cmd_eval(args) -> tuple[int, dict, str]:
    from .asymptotics import ContinuationConfig, continue_sum

    try:
        node = E.parse(args.expression)
    except E.ExprSyntaxError as e:
        raise UsageError(str(e)) from None
    Ns = parse_points(args.N) if args.N else [None]
    cfg = ContinuationConfig(digits=args.digits, eta=_eta(args.branch))

    def hook(indices, arg):
        return continue_sum(indices, arg, cfg).value

    rows = []
    with mp.workdps(args.digits + 10):
        for n in Ns:
            ctx = E.Context(N=_numeric(n), digits=args.digits, eta=_eta(args.branch), sum_value=hook)
            val = E.evaluate(node, ctx)
            rows.append({"N": None if n is None else str(n), "value": _fmt(val, args.digits),
                         "exact": isinstance(val, Fraction)})
    text = "\n".join(r["value"] if r["N"] is None else f"N={r['N']}: {r['value']}" for r in rows)
    return EXIT_OK, {"expression": args.expression, "results": rows}, text


def cmd_mellin(args) -> tuple[int, dict, str]:
    from .mellin import atom, mellin

    try:
        num, den = E.split_kernel(E.parse(args.kernel))
    except E.ExprSyntaxError as e:
        raise UsageError(str(e)) from None
    try:
        a = atom(E.to_text(num), den, plus=args.plus, alt=args.alt)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = []
    for n in parse_points(args.N or "1..5"):
        res = mellin(a, _numeric(n), args.digits, eta=_eta(args.branch))
        rows.append({"N": str(n), "value": _fmt(res.value, args.digits), "error": mpmath.nstr(res.error, 3)})
    text = "\n".join([a.text()] + [f"N={r['N']}: {r['value']}" for r in rows])
    return EXIT_OK, {"atom": a.text(), "results": rows}, text


def cmd_reduce(args) -> tuple[int, dict, str]:
    from .algebra import algebraic_reduce
    from .sums import IndexVectorError

    text = args.sum.strip()
    if text.startswith("S["):
        node = E.parse(text if text.endswith(")") else text + "(N)")
        text = ",".join(str(i) for i in node.indices)
    try:
        p = algebraic_reduce(text)
    except IndexVectorError as e:
        raise UsageError(str(e)) from None
    return EXIT_OK, {"sum": args.sum, "reduction": p.to_json()}, str(p)


def cmd_verify(args) -> tuple[int, dict, str]:
    from .identities import catalog, verify_all

    Ns = parse_points(args.N or "1..12")
    if any(not isinstance(n, int) or n < 1 for n in Ns):
        raise UsageError("--N must list positive integers")
    records = catalog(args.catalog) if args.catalog else None
    summary = verify_all(Ns, args.digits, section=args.section, records=records, jobs=args.jobs)
    if not summary.counted:
        raise UsageError(f"no relations in section {args.section!r}")
    code = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[summary.status]
    return code, summary.to_json(), summary.to_text()


def cmd_basis(args) -> tuple[int, dict, str]:
    from .identities import basis_list

    try:
        fs = basis_list(args.weight)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = [{"weight": f.weight, "kernel": f.kernel, "elementary": f.elementary} for f in fs]
    return EXIT_OK, {"weight": args.weight, "functions": rows}, "\n".join(f.atom_text() for f in fs)


def cmd_continue(args) -> tuple[int, dict, str]:
    from .asymptotics import ContinuationConfig, PoleError, UnsupportedSumError, continue_sum
    from .sums import IndexVectorError, as_index_vector

    try:
        v = as_index_vector(args.sum.strip().removeprefix("S").strip("[]"))
    except IndexVectorError as e:
        raise UsageError(str(e)) from None
    cfg = ContinuationConfig(digits=args.digits, eta=_eta(args.branch), z_min=args.z_min)
    rows = []
    for n in parse_points(args.N or "2.5"):
        try:
            r = continue_sum(v, _numeric(n), cfg, method=args.method)
        except (UnsupportedSumError, PoleError) as e:
            raise UsageError(str(e)) from None
        rows.append({"N": str(n), "value": _fmt(r.value, args.digits), "route": r.route, "shift": r.shift,
                     "nearest_pole": r.nearest_pole, "pole_distance": mpmath.nstr(r.pole_distance, 6)})
    text = "\n".join(f"N={r['N']}: {r['value']}  [{r['route']}, shift {r['shift']}]" for r in rows)
    return EXIT_OK, {"sum": list(v), "results": rows}, text


def cmd_constants(args) -> tuple[int, dict, str]:
    from .specfun import constants as C

    names = args.names.split(";") if args.names else C.DEFAULT_NAMES
    rows = []
    for n in names:
        try:
            c = C.constant(n, args.digits)
        except C.UnknownConstantError:
            raise UsageError(f"unknown constant {n!r}; known names include {', '.join(C.DEFAULT_NAMES)}") from None
        rows.append({"name": c.name, "weight": c.weight, "value": mpmath.nstr(c.value, args.digits),
                     "provenance": c.provenance})
    text = "\n".join(f"{r['name']:10s} {r['value']}" for r in rows)
    return EXIT_OK, {"digits": args.digits, "constants": rows}, text


def cmd_asym(args) -> tuple[int, dict, str]:
    from .asymptotics import KernelSeriesError, asym_eval, li5_series, series_from_kernel

    try:
        if args.kernel is None:
            s = li5_series(max(args.terms + 1, 20))
        else:
            s = series_from_kernel(args.kernel, args.terms + 1, args.shift)
    except (KernelSeriesError, E.ExprSyntaxError) as e:
        raise UsageError(str(e)) from None
    data = s.to_json()
    data["coefficients"] = data["coefficients"][: args.terms]
    lines = s.to_text().splitlines()[: args.terms + 1]
    if args.z is not None:
        z = _numeric(parse_point(args.z))
        with mp.workdps(args.digits + 10):
            res = asym_eval(s, z, args.terms, args.digits, z_min=0)
        data["z"] = args.z
        data["value"] = _fmt(res.value, args.digits)
        data["bound"] = mpmath.nstr(res.bound, 3)
        lines.append(f"value at z={args.z}: {data['value']}  (first omitted term {data['bound']})")
    return EXIT_OK, data, "\n".join(lines)


# -- parser and entry point --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=_digits, default=None,
                        help=f"working precision, 20..200 (default ${DIGITS_ENV} or 30)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file")

    p = argparse.ArgumentParser(prog="harmsum", description="Nested harmonic sums and their Mellin representations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("expression")
    s.add_argument("--N", help="values of N: a..b or a comma list (rational, decimal or complex)")
    s.add_argument("--branch", choices=("even", "odd"))
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("mellin", parents=[common], help="Mellin transform of a kernel")
    s.add_argument("kernel", help='e.g. "Li2(x)/(x-1)"')
    s.add_argument("--N")
    s.add_argument("--plus", action="store_true")
    s.add_argument("--alt", action="store_true", help="alternating weight (-x)^N")
    s.add_argument("--branch", choices=("even", "odd"))
    s.set_defaults(run=cmd_mellin)

    s = sub.add_parser("reduce", parents=[common], help="express a sum through the Lyndon basis")
    s.add_argument("sum", help='index list "2,1,1" or "S[2,1,1]"')
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("verify", parents=[common], help="check catalog relations numerically")
    s.add_argument("--section", default="all")
    s.add_argument("--N")
    s.add_argument("--catalog", help="catalog file or directory replacing the built-in one")
    s.add_argument("--jobs", type=int)
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("basis", parents=[common], help="list the basic functions of one weight")
    s.add_argument("--weight", type=int, required=True)
    s.set_defaults(run=cmd_basis)

    s = sub.add_parser("continue", parents=[common], help="analytic continuation of a sum")
    s.add_argument("sum", help='index list, e.g. "2,1,1,1,1"')
    s.add_argument("--N")
    s.add_argument("--branch", choices=("even", "odd"))
    s.add_argument("--z-min", type=float, dest="z_min")
    s.add_argument("--method", choices=("auto", "tail"), default="auto")
    s.set_defaults(run=cmd_continue)

    s = sub.add_parser("constants", parents=[common], help="the constant registry")
    s.add_argument("--names", help='semicolon-separated, e.g. "zeta(3);ln2"')
    s.set_defaults(run=cmd_constants)

    s = sub.add_parser("asym", parents=[common], help="asymptotic series of a Mellin transform")
    s.add_argument("--kernel", help="kernel analytic at x = 1 (default Li5(1-x)/(1-x))")
    s.add_argument("--terms", type=int, default=19)
    s.add_argument("--shift", type=Fraction, default=Fraction(1))
    s.add_argument("--z")
    s.set_defaults(run=cmd_asym)
    return p


def main(argv=None) -> int:
    from .mellin import NonIntegrableError
    from .specfun.quadrature import QuadratureError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.digits is None:
            args.digits = _default_digits()
        code, data, text = args.run(args)
    except UsageError as e:
        print(f"harmsum: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as e:
        print(f"harmsum: inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (E.EvaluationError, NonIntegrableError, ValueError, ZeroDivisionError) as e:
        print(f"harmsum: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        data = {"schema": data.get("schema", SCHEMA), "verb": args.verb, **{k: v for k, v in data.items()
                                                                             if k != "schema"}}
        out = json.dumps(data, indent=2, default=str)
    else:
        out = text
    if args.out:
        with open(args.out, "w") as f:
            f.write(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
