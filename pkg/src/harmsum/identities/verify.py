"""Numeric and exact verification of catalog records."""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .. import expr as E
from ..mellin import NonIntegrableError
from ..specfun.hpl import eval_series
from ..specfun.quadrature import QuadratureError, integrate
from .catalog import INTEGRAL_POINTS, RelationRecord, catalog, select, weight_problems

SCHEMA = "harmsum.verify/1"
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class VerificationReport:
    id: str
    variant: str | None
    kind: str
    digits: int
    tolerance: object
    points: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    status: str = PASS
    message: str = ""

    @property
    def key(self) -> str:
        return f"{self.id}[{self.variant}]" if self.variant else self.id

    @property
    def max_residual(self):
        vals = [E._to_mpf(r) for r in self.residuals if r is not None]
        return max(vals) if vals else None

    @property
    def counts(self) -> bool:
        return self.variant != "as_written"

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        def fmt(v):
            return None if v is None else mpmath.nstr(v, 3) if v else "0"

        return {
            "id": self.id,
            "variant": self.variant,
            "kind": self.kind,
            "digits": self.digits,
            "tolerance": fmt(self.tolerance),
            "points": [str(p) for p in self.points],
            "residuals": [fmt(r) for r in self.residuals],
            "max_residual": fmt(self.max_residual),
            "status": self.status,
            "message": self.message,
        }


def tolerance(digits: int):
    return mpf(10) ** (-(digits - 10))


# -- evaluation of one side -----------------------------------------------------


def _value(text: str, N, digits: int):
    return E.evaluate(E.parse(text), E.Context(N=N, digits=digits))


def _difference(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return E._to_mpf(a) - E._to_mpf(b)


def _split_integrand(text: str):
    node = E.parse(text)
    if isinstance(node, E.Bin) and node.op == "/" and isinstance(node.right, E.Var) and node.right.name == "x":
        return node.left, "x"
    num, den = E.split_kernel(node)
    if den not in (None, "x-1", "1-x", "1+x"):
        raise E.EvaluationError(f"unsupported integrand denominator {den}")
    return num, den


def integral_lhs(integrand: str, X, digits: int):
    """int_0^X integrand(y) dy by tanh-sinh quadrature on y = X u.

    The numerator is evaluated from its expansions around 0 and 1, which are
    independent of the pointwise function values used on the right-hand side.
    """
    num, den = _split_integrand(integrand)
    dps = digits + 10
    comb = E.compile_kernel(E.to_text(num), dps)
    a, b = comb.series(dps)
    with mp.workdps(dps):
        X = E._to_mpf(Fraction(X))
        lX = mpmath.log(X)
        if den == "x":
            cut = mpf(10) ** (-(dps - 4))
            if any(row and abs(row[0]) > cut for row in a):
                raise NonIntegrableError(f"{integrand}: numerator does not vanish at x = 0")

        def f(u, t, lu, lt):
            y = X * u
            if y <= 0.5:
                v = eval_series(a, y, lX + lu)
            else:
                v = eval_series(b, 1 - y, mpmath.log1p(-y))
            if den == "x":
                return v / y
            if den == "x-1":
                return v / (y - 1)
            if den == "1-x":
                return v / (1 - y)
            if den == "1+x":
                return v / (1 + y)
            return v

        val, _ = integrate(f, dps)
        return X * val


def _integral_rhs(rhs: str, X, digits: int):
    node = E.substitute(E.parse(rhs), "x", E.Num(str(Fraction(X))))
    return E.evaluate(node, E.Context(digits=digits))


def residual_at(rec: RelationRecord, point, digits: int, lhs: str | None = None, rhs: str | None = None):
    """|lhs - rhs| at one N (or one x for integrals); exact zero when both sides are rational."""
    lhs = rec.lhs if lhs is None else lhs
    rhs = rec.rhs if rhs is None else rhs
    with mp.workdps(digits + 10):
        if rec.kind == "integral":
            d = _difference(integral_lhs(lhs, point, digits), _integral_rhs(rhs, point, digits))
        elif rec.kind == "constant":
            d = _difference(_value(lhs, None, digits), _value(rhs, None, digits))
        else:
            d = _difference(_value(lhs, point, digits), _value(rhs, point, digits))
        return abs(d)


# -- single records -------------------------------------------------------------


def _tasks(rec: RelationRecord, Ns) -> list[tuple]:
    """(label, point, lhs, rhs) for every evaluation a record needs."""
    out = []
    for lhs, rhs, sub in rec.instances():
        tag = ",".join(f"{k}={v}" for k, v in sub.items())
        if rec.kind == "integral":
            out += [(str(x), x, lhs, rhs) for x in INTEGRAL_POINTS]
        elif rec.kind == "constant":
            out.append((tag or "-", None, lhs, rhs))
        else:
            out += [(f"{tag}:{n}" if tag else n, n, lhs, rhs) for n in Ns]
    return out


def _run(rec: RelationRecord, label, point, lhs, rhs, digits):
    try:
        return label, residual_at(rec, point, digits, lhs, rhs), None
    except QuadratureError as e:
        return label, None, (INCONCLUSIVE, f"quadrature: {e}")
    except (NonIntegrableError, E.EvaluationError, ValueError, ZeroDivisionError) as e:
        return label, None, (FAIL, f"{type(e).__name__}: {e}")


def _finish(rec: RelationRecord, digits: int, results) -> VerificationReport:
    tol = tolerance(digits)
    rep = VerificationReport(rec.id, rec.variant, rec.kind, digits, tol)
    problems = []
    for label, res, err in results:
        rep.points.append(label)
        rep.residuals.append(res)
        if err is not None:
            problems.append(err)
    exact = rec.kind == "algebraic"
    bad = [
        (p, r) for p, r in zip(rep.points, rep.residuals)
        if r is not None and (r != 0 if exact else not E._to_mpf(r) < tol)
    ]
    if any(s == FAIL for s, _ in problems):
        rep.status = FAIL
        rep.message = next(m for s, m in problems if s == FAIL)
    elif bad:
        rep.status = FAIL
        rep.message = f"residual {mpmath.nstr(bad[0][1], 3)} at {bad[0][0]}"
    elif problems:
        rep.status = INCONCLUSIVE
        rep.message = problems[0][1]
    w = weight_problems(rec)
    if w and rep.status == PASS:
        rep.status = FAIL
        rep.message = "weight: " + w[0]
    return rep


def verify(rec: RelationRecord, Ns=(1, 2, 3), digits: int = 50) -> VerificationReport:
    """Check ``rec`` at each N in ``Ns`` (integrals at fixed x, constants once).

    Pass means every residual is below 10^-(digits - 10); records of kind
    ``algebraic`` must agree exactly.  A quadrature that does not converge
    makes the report inconclusive rather than failed.
    """
    if any(int(n) < 1 for n in Ns):
        raise ValueError("N must be a positive integer")
    results = [_run(rec, *t, digits) for t in _tasks(rec, Ns)]
    return _finish(rec, digits, results)


# -- the whole catalog -------------------------------------------------------------


@dataclass
class Summary:
    digits: int
    Ns: list
    reports: list

    @property
    def counted(self) -> list:
        return [r for r in self.reports if r.counts]

    @property
    def failures(self) -> list:
        return [r for r in self.counted if r.status == FAIL]

    @property
    def inconclusive(self) -> list:
        return [r for r in self.counted if r.status == INCONCLUSIVE]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.inconclusive

    @property
    def status(self) -> str:
        if self.failures:
            return FAIL
        if self.inconclusive:
            return INCONCLUSIVE
        return PASS

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "digits": self.digits,
            "N": list(self.Ns),
            "status": self.status,
            "counted": len(self.counted),
            "failures": [{"id": r.key, "max_residual": r.to_json()["max_residual"], "message": r.message}
                         for r in self.failures],
            "reports": [r.to_json() for r in self.reports],
        }

    def to_text(self) -> str:
        rows = [f"{'relation':34s} {'kind':9s} {'status':12s} {'max residual':>12s}  note"]
        for r in self.reports:
            mr = r.max_residual
            mr = "-" if mr is None else "0" if mr == 0 else mpmath.nstr(mr, 3)
            status = r.status if r.counts else f"({r.status})"
            rows.append(f"{r.key:34s} {r.kind:9s} {status:12s} {mr:>12s}  {r.message}".rstrip())
        n = len(self.counted)
        rows.append(f"{n - len(self.failures) - len(self.inconclusive)}/{n} relations pass at {self.digits} digits"
                    + (f"; {len(self.failures)} fail" if self.failures else "")
                    + (f"; {len(self.inconclusive)} inconclusive" if self.inconclusive else ""))
        return "\n".join(rows)


def _worker(args):
    rec, label, point, lhs, rhs, digits = args
    return _run(rec, label, point, lhs, rhs, digits)


def verify_all(Ns=range(1, 13), digits: int = 50, section: str | None = None, records=None,
               jobs: int | None = None, include_as_written: bool = True) -> Summary:
    """Verify every record (of one section, if given); (record, N) pairs run in parallel."""
    Ns = [int(n) for n in Ns]
    records = catalog(include_as_written=include_as_written) if records is None else list(records)
    records = select(records, section)
    if not Ns:
        return Summary(digits, Ns, [])
    work = [(i, t) for i, rec in enumerate(records) for t in _tasks(rec, Ns)]
    jobs = jobs or int(os.environ.get("HARMSUM_JOBS", "1"))
    args = [(records[i], *t, digits) for i, t in work]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, args, chunksize=4))
    else:
        results = [_worker(a) for a in args]
    per = [[] for _ in records]
    for (i, _), res in zip(work, results):
        per[i].append(res)
    return Summary(digits, Ns, [_finish(rec, digits, res) for rec, res in zip(records, per)])


def dumps(summary: Summary) -> str:
    return json.dumps(summary.to_json(), indent=2)
