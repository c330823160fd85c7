"""Large-N expansions of Mellin transforms and harmonic sums at complex N.

A kernel g(x) that is analytic at x = 1 has an expansion
g = sum_n b_n (1-x)^n, and then

    M[g](N) = sum_n b_n n! / ((N+1)(N+2)...(N+n+1))

is a factorial series.  Expanding every term in 1/z with z = N + shift gives
an asymptotic series sum_k c_k / z^k with exact rational c_k whenever the
b_n are rational.  Values at small or complex N follow from the recursion
in N, run downwards from a point where the series is accurate.

Sums whose representation needs kernels with logarithms at x = 1 are not
handled by the factorial series.  For positive indices there is an
independent route (``method="tail"``): Euler-Maclaurin expansions of the
nested sums in ln N and 1/N, with the constant fixed at one integer point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from . import expr as E

SCHEMA = "harmsum.asym/1"
GUARD = 15
LI5_KERNEL = "Li5(1-x)/(1-x)"

# The 19 leading coefficients of M[Li5(1-x)/(1-x)] in 1/z, z = N + 1, as printed.
PRINTED_LI5_COEFFICIENTS = tuple(Fraction(c) for c in (
    "1", "1/32", "-179/7776", "515/41472", "-216383/194400000", "-183781/25920000",
    "4644828197/653456160000", "153375307/49787136000", "-371224706507/25204737600000",
    "959290541/160030080000", "575134377343021/16913534146740000",
    "-14855426650259/312400053504000",
    "-29106619674489691525729/319702820637227227200000",
    "225456132288901603/788601079506240000",
    "263567702701300558681/1053965342760089760000",
    "-355061945309358701/187184432058624000",
    "-1432477558547377054456843733/4988266898917709221214400000",
    "192140702840923335916939/13028192458306945920000",
    "-2027981189268747465011536794768001/254294408120596135866406712880000",
))


class KernelSeriesError(ValueError):
    """The kernel has no exact rational expansion around x = 1."""


class SingularKernelError(KernelSeriesError):
    """The kernel is not analytic at x = 1 (logarithms or poles there)."""


class AsymptoticRangeError(ValueError):
    pass


class UnsupportedSumError(ValueError):
    pass


class PoleError(ValueError):
    pass


# -- exact power series in t = 1 - x ----------------------------------------------


def _zeros(L: int) -> list:
    return [Fraction(0)] * L


def _mul(a: list, b: list) -> list:
    L = min(len(a), len(b))
    out = _zeros(L)
    for i in range(L):
        ai = a[i]
        if ai:
            for j in range(L - i):
                out[i + j] += ai * b[j]
    return out


def _inv(a: list) -> list:
    if not a[0]:
        raise ZeroDivisionError
    out = _zeros(len(a))
    out[0] = 1 / a[0]
    for n in range(1, len(a)):
        out[n] = -out[0] * sum(a[k] * out[n - k] for k in range(1, n + 1))
    return out


def _valuation(a: list) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    return len(a)


def _compose(f: list, u: list) -> list:
    """f(u(t)) for u(0) = 0, by Horner's rule."""
    L = len(u)
    out = _zeros(L)
    for c in reversed(f[:L]):
        out = _mul(out, u)
        out[0] += c
    return out


def _word_series(word: tuple, L: int) -> list:
    """Taylor coefficients of H_word(u) at u = 0 (letters 0, 1, -1)."""
    if word[-1] == 0:
        raise SingularKernelError("a trailing 0 in an HPL word gives ln at the expansion point")
    h = None
    for a in reversed(word):
        if h is None:
            sign = 1 if a == 1 else -1
            h = [Fraction(0)] + [Fraction(sign ** (n + 1), n) for n in range(1, L)]
            continue
        if a == 0:
            h = [Fraction(0)] + [h[n] / n for n in range(1, L)]
            continue
        out = _zeros(L)
        acc = Fraction(0)
        for m in range(L - 1):
            acc = acc * a + h[m] if a == -1 else acc + h[m]
            out[m + 1] = acc / (m + 1)
        h = out
    return h


def _function_word(name: str) -> tuple | None:
    m = E._LI.match(name)
    if m:
        return (0,) * (int(m.group(1)) - 1) + (1,)
    m = E._NIELSEN.match(name)
    if m:
        return (0,) * int(m.group(1)) + (1,) * int(m.group(2))
    return None


def _tser(node, L: int) -> list:
    if isinstance(node, E.Num):
        out = _zeros(L)
        out[0] = Fraction(node.text)
        return out
    if isinstance(node, E.Var):
        if node.name != "x":
            raise KernelSeriesError(f"kernel depends on {node.name}")
        out = _zeros(L)
        out[0] = Fraction(1)
        if L > 1:
            out[1] = Fraction(-1)
        return out
    if isinstance(node, E.Neg):
        return [-c for c in _tser(node.operand, L)]
    if isinstance(node, E.Bin):
        if node.op in "+-":
            a, b = _tser(node.left, L), _tser(node.right, L)
            return [x + y for x, y in zip(a, b)] if node.op == "+" else [x - y for x, y in zip(a, b)]
        if node.op == "*":
            return _mul(_tser(node.left, L), _tser(node.right, L))
        if node.op == "/":
            return _divide(node.left, node.right, L)
        if node.op == "^":
            k = Fraction(E.to_text(node.right)) if isinstance(node.right, E.Num) else None
            if k is None or k.denominator != 1:
                raise KernelSeriesError(f"non-integer power in {E.to_text(node)}")
            k = int(k)
            if k < 0:
                return _divide(E.Num("1"), E.Bin("^", node.left, E.Num(str(-k))), L)
            base = _tser(node.left, L)
            out = _zeros(L)
            out[0] = Fraction(1)
            for _ in range(k):
                out = _mul(out, base)
            return out
    if isinstance(node, E.HplRef):
        u = _argument(node, L)
        return _compose(_word_series(tuple(node.word), L), u)
    if isinstance(node, E.Call):
        if node.name in ("ln", "log"):
            u = _tser(node.args[0], L)
            if not u[0]:
                raise SingularKernelError(f"{E.to_text(node)} is singular at x = 1")
            if u[0] != 1:
                raise KernelSeriesError(f"{E.to_text(node)} has an irrational constant term")
            w = list(u)
            w[0] = Fraction(0)
            return _compose([Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, L)], w)
        word = _function_word(node.name)
        if word is not None:
            return _compose(_word_series(word, L), _argument(node, L))
    raise KernelSeriesError(f"no exact expansion at x = 1 for {E.to_text(node)}")


def _argument(node, L: int) -> list:
    arg = node.arg if isinstance(node, E.HplRef) else node.args[0]
    u = _tser(arg, L)
    if u[0]:
        raise SingularKernelError(
            f"{E.to_text(node)}: argument does not vanish at x = 1, the function is not analytic there"
        )
    return u


def _divide(num_node, den_node, L: int) -> list:
    den = _tser(den_node, L)
    v = _valuation(den)
    if v == L:
        den = _tser(den_node, 2 * L)
        v = _valuation(den)
        if v == 2 * L:
            raise KernelSeriesError(f"division by zero: {E.to_text(den_node)}")
    if v:
        den = _tser(den_node, L + v)
    num = _tser(num_node, L + v)
    if _valuation(num) < v:
        raise SingularKernelError(
            f"{E.to_text(num_node)}/({E.to_text(den_node)}) has a pole at x = 1"
        )
    return _mul(num[v:], _inv(den[v:]))


def kernel_tseries(kernel: str, order: int) -> list[Fraction]:
    """b_0..b_{order-1} with kernel(x) = sum b_n (1-x)^n, exactly."""
    return _tser(E.parse(kernel), order)


# -- asymptotic series ------------------------------------------------------------


@lru_cache(maxsize=64)
def _term_expansion(n: int, p: int, shift: Fraction) -> Fraction:
    """[z^-(p+1)] of n!/prod_{k=1}^{n+1} (z + k - shift)."""
    return sum(
        (Fraction((-1) ** (k - 1) * math.comb(n, k - 1)) * (shift - k) ** p for k in range(1, n + 2)),
        Fraction(0),
    )


def factorial_to_asymptotic(b, order: int, shift=1) -> tuple[Fraction, ...]:
    """c_1..c_order of sum_n b_n n!/((N+1)...(N+n+1)) in powers of 1/(N + shift)."""
    shift = Fraction(shift)
    out = []
    for K in range(1, order + 1):
        out.append(sum((b[n] * _term_expansion(n, K - 1, shift) for n in range(min(K, len(b))) if b[n]),
                       Fraction(0)))
    return tuple(out)


@dataclass(frozen=True)
class AsymptoticSeries:
    """sum_k c_k / z^k for M[kernel](N), with z = N + shift."""

    coefficients: tuple
    shift: Fraction = Fraction(1)
    kernel: str = ""
    z_min: float = 25.0

    def __len__(self) -> int:
        return len(self.coefficients)

    def coefficient(self, k: int) -> Fraction:
        if not 1 <= k <= len(self.coefficients):
            raise IndexError(f"coefficient {k} not available (have 1..{len(self.coefficients)})")
        return self.coefficients[k - 1]

    def z_of(self, N):
        return N + (mpf(self.shift.numerator) / self.shift.denominator if self.shift.denominator != 1
                    else int(self.shift))

    def bound(self, z, terms: int):
        """Magnitude of the first non-zero omitted term after ``terms`` terms."""
        for k in range(terms + 1, len(self.coefficients) + 1):
            c = self.coefficients[k - 1]
            if c:
                return abs(mpf(c.numerator) / c.denominator) / abs(z) ** k
        if any(self.coefficients):
            raise ValueError(f"no non-zero coefficient beyond c_{terms}; derive a longer series")
        return mpf(0)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kernel": self.kernel,
            "shift": str(self.shift),
            "coefficients": [{"k": k, "coeff": str(c)} for k, c in enumerate(self.coefficients, 1)],
        }

    def to_text(self) -> str:
        head = f"M[{self.kernel}](N) ~ sum_k c_k / z^k,  z = N + {self.shift}"
        return "\n".join([head] + [f"c_{k} = {c}" for k, c in enumerate(self.coefficients, 1)])


def series_from_kernel(kernel: str, order: int = 24, shift=1) -> AsymptoticSeries:
    """Exact asymptotic series of M[kernel](N); the kernel must be analytic at x = 1."""
    b = kernel_tseries(kernel, order)
    return AsymptoticSeries(factorial_to_asymptotic(b, order, shift), Fraction(shift), kernel)


def li5_series(order: int = 24) -> AsymptoticSeries:
    """The derived series for M[Li5(1-x)/(1-x)], checked against the printed coefficients."""
    s = series_from_kernel(LI5_KERNEL, max(order, len(PRINTED_LI5_COEFFICIENTS)))
    got = s.coefficients[: len(PRINTED_LI5_COEFFICIENTS)]
    if got != PRINTED_LI5_COEFFICIENTS:
        bad = next(k for k, (a, b) in enumerate(zip(got, PRINTED_LI5_COEFFICIENTS), 1) if a != b)
        raise ArithmeticError(f"derived coefficient c_{bad} differs from the printed value")
    return s


@dataclass(frozen=True)
class AsymptoticValue:
    value: object
    bound: object
    terms: int
    z: object


def asym_eval(series: AsymptoticSeries, z, terms: int = 19, digits: int | None = None,
              z_min: float | None = None) -> AsymptoticValue:
    """Truncated series at z, with the first omitted term as error estimate."""
    z_min = series.z_min if z_min is None else z_min
    if not 1 <= terms < len(series):
        raise ValueError(f"terms must be between 1 and {len(series) - 1}")
    with mp.workdps((digits or mp.dps) + GUARD):
        z = mpmath.mpmathify(z)
        if abs(z) < z_min:
            raise AsymptoticRangeError(f"|z| = {mpmath.nstr(abs(z), 6)} is below z_min = {z_min}")
        w = 1 / z
        acc = 0
        for c in reversed(series.coefficients[:terms]):
            acc = (acc + mpf(c.numerator) / c.denominator) * w
        return AsymptoticValue(acc, series.bound(z, terms), terms, z)


# -- continuation ------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuationConfig:
    """``z_min``: smallest Re(N) at which large-N expansions are used.

    When not given it is chosen so that the truncation error of the
    ``terms``-term series for Li5(1-x)/(1-x) stays below 10^-digits, but
    never below 25.
    """

    digits: int = 30
    z_min: float | None = None
    eta: int | None = None
    terms: int = 19

    def threshold(self) -> float:
        if self.z_min is not None:
            return float(self.z_min)
        c = li5_series(self.terms + 1).coefficient(self.terms + 1)
        with mp.workdps(30):
            need = (abs(mpf(c.numerator) / c.denominator) * mpf(10) ** self.digits) ** (mpf(1) / (self.terms + 1))
        return max(25.0, math.ceil(float(need)))


@dataclass(frozen=True)
class ContinuedValue:
    value: object
    route: str
    shift: int
    nearest_pole: int
    pole_distance: object


def _pole(N) -> tuple[int, object]:
    n = min(-1, int(mpmath.nint(mpmath.re(N))))
    return n, abs(N - n)


def _shift_for(N, z_min: float, extra: int) -> int:
    return max(0, math.ceil(z_min - float(mpmath.re(N)))) + extra


def single_sum(k: int, N):
    """S_k(N) for k >= 1 through digamma and Hurwitz zeta."""
    if k == 1:
        return mpmath.digamma(N + 1) + mpmath.euler
    return mpmath.zeta(k) - mpmath.zeta(k, N + 1)


def ones_sum(k: int, N):
    """S_{1,...,1}(N) (k ones) from the single sums by Newton's identities."""
    p = [None] + [single_sum(m, N) for m in range(1, k + 1)]
    h = [mpf(1)]
    for j in range(1, k + 1):
        h.append(sum(p[m] * h[j - m] for m in range(1, j + 1)) / j)
    return h[k]


@lru_cache(maxsize=16)
def _ladder_series(k: int, order: int) -> AsymptoticSeries:
    return series_from_kernel(f"Li{k}(1-x)/(1-x)", order)


def li_ladder(kmax: int, N, cfg: ContinuationConfig, extra_shift: int = 0) -> tuple[list, int]:
    """[G_0(N), ..., G_kmax(N)] with G_k(N) = M[Li_k(1-x)/(1-x)](N) and G_0(N) = 1/N.

    Each G_k with k >= 1 is taken from its asymptotic series at N + m and
    brought down by G_k(N) = G_k(N+1) + G_{k-1}(N+1)/(N+1).
    """
    z_min = cfg.threshold()
    m = _shift_for(N, z_min, extra_shift)
    top = N + m
    G = [1 / top]
    for k in range(1, kmax + 1):
        s = _ladder_series(k, cfg.terms + 4)
        G.append(asym_eval(s, s.z_of(top), cfg.terms, cfg.digits, z_min=0).value)
    for j in range(m - 1, -1, -1):
        a = N + j + 1
        for k in range(kmax, 0, -1):
            G[k] = G[k] + G[k - 1] / a
        G[0] = 1 / (N + j)
    return G, m


def _factorial_route(k: int, N, cfg: ContinuationConfig, extra_shift: int):
    """S_{1,...,1,2}(N) of depth k from M[Li_k(1-x)/(1-x)] and the sums S_{1,...,1}."""
    G, m = li_ladder(k, N, cfg, extra_shift)
    acc = G[k]
    for j in range(k):
        z = mpmath.zeta(k + 1 - j)
        acc -= (-1) ** j * z * (ones_sum(j, N) if j else 1)
    return (-1) ** k * acc, m


def _positive(v: tuple) -> bool:
    return all(a > 0 for a in v)


def _is_factorial(v: tuple) -> bool:
    return len(v) >= 2 and v[-1] == 2 and all(a == 1 for a in v[:-1]) and len(v) <= 8


DECOMPOSED = (2, 1, 1, 1, 1)


def routes_for(v) -> str:
    v = tuple(v)
    if not v or not _positive(v):
        return "unsupported"
    if len(v) == 1:
        return "single"
    if all(a == 1 for a in v):
        return "ones"
    if _is_factorial(v):
        return "factorial"
    if v == DECOMPOSED:
        return "decomposition"
    return "tail-only"


def continue_sum(v, N, cfg: ContinuationConfig | None = None, method: str = "auto",
                 extra_shift: int = 0) -> ContinuedValue:
    """S_v(N) at real or complex N.

    ``method="auto"`` handles single sums, S_{1,...,1}, S_{1,...,1,2} (via
    the factorial series of Li_k(1-x)/(1-x)) and S_{2,1,1,1,1} (via its
    decomposition into S_{1,1,1,1,2} and sums of lower depth).  Other
    positive-index sums are rejected unless ``method="tail"`` is asked for
    explicitly.  ``extra_shift`` moves the matching point further out, which
    must not change the result.
    """
    from .sums import as_index_vector

    cfg = cfg or ContinuationConfig()
    v = as_index_vector(v)
    route = routes_for(v)
    if route == "unsupported":
        raise UnsupportedSumError(f"no continuation for S{list(v)}: only positive indices are supported")
    if method not in ("auto", "tail"):
        raise ValueError("method must be 'auto' or 'tail'")
    if method == "auto" and route == "tail-only":
        raise UnsupportedSumError(
            f"S{list(v)} needs kernels that are singular at x = 1; use method='tail'"
        )
    with mp.workdps(cfg.digits + GUARD):
        N = mpmath.mpmathify(N)
        pole, dist = _pole(N)
        if dist < mpf(10) ** (-(cfg.digits // 2)):
            raise PoleError(f"N = {mpmath.nstr(N, 10)} is within {mpmath.nstr(dist, 3)} of the pole at {pole}")
        if method == "tail":
            route = "tail"
            val, m = _tail_value(v, N, cfg, extra_shift)
        else:
            val, m = _auto(v, N, cfg, extra_shift)
        return ContinuedValue(+val, route, m, pole, dist)


def _auto(v: tuple, N, cfg, extra_shift: int):
    route = routes_for(v)
    if route == "single":
        return single_sum(v[0], N), 0
    if route == "ones":
        return ones_sum(len(v), N), 0
    if route == "factorial":
        return _factorial_route(len(v), N, cfg, extra_shift)
    if route == "decomposition":
        return _decomposition_route(N, cfg, extra_shift)
    return _tail_value(v, N, cfg, extra_shift)


def _decomposition_route(N, cfg, extra_shift: int):
    from .identities.catalog import find

    rec = find("S2,1,1,1,1:decomposition")
    shifts = []

    def hook(indices, arg):
        val, m = _auto(tuple(indices), arg, cfg, extra_shift)
        shifts.append(m)
        return val

    ctx = E.Context(N=N, digits=cfg.digits + GUARD, sum_value=hook, hook_integers=True)
    val = E.evaluate(E.parse(rec.rhs), ctx)
    return E._to_mpf(val), max(shifts, default=0)


def continue_by_mellin(v, N, digits: int = 30):
    """S_{2,1,1,1,1} or S_{1,1,1,1,2} from Mellin quadrature at N itself (Re N > -1)."""
    from .mellin import atom, mellin

    v = tuple(v)
    with mp.workdps(digits + GUARD):
        N = mpmath.mpmathify(N)
        if v == DECOMPOSED:
            M = mellin(atom("S14(x)", "x-1", plus=True), N, digits).value
            return -M + mpmath.zeta(5) * single_sum(1, N)
        if v == (1, 1, 1, 1, 2):
            M = mellin(atom("Li5(1-x)", "1-x"), N, digits).value
            acc = -M + mpmath.zeta(6)
            for j in range(1, 5):
                acc += (-1) ** j * mpmath.zeta(6 - j) * ones_sum(j, N)
            return acc
    raise UnsupportedSumError(f"no Mellin route for S{list(v)}")


# -- Euler-Maclaurin tail route ----------------------------------------------------
#
# An expansion is a dict {(i, s): c} for sum c ln^i(N) / N^s.


def _antiderivative(i: int, s: int) -> dict:
    if s == 1:
        return {(i + 1, 0): Fraction(1, i + 1)}
    a = Fraction(1 - s)
    out = {}
    for r in range(i + 1):
        out[(i - r, s - 1)] = Fraction((-1) ** r * math.perm(i, r)) / a ** (r + 1)
    return out


def _derivative(term: dict) -> dict:
    out: dict = {}
    for (i, s), c in term.items():
        if i:
            out[(i - 1, s + 1)] = out.get((i - 1, s + 1), 0) + c * i
        out[(i, s + 1)] = out.get((i, s + 1), 0) - c * s
    return out


def _tail_order(z_min: float, dps: int) -> int:
    """Smallest J with J!/(2 pi z_min)^J below 10^-dps."""
    target = -dps * math.log(10)
    for J in range(6, 400):
        if math.lgamma(J + 1) - J * math.log(2 * math.pi * z_min) < target:
            return J
    raise AsymptoticRangeError("z_min too small for the Euler-Maclaurin expansion")


def _direct(v: tuple, n: int) -> list:
    """S_v(k) for k = 0..n by direct summation in working precision."""
    vals = [mpf(1)] * (n + 1)
    for a in reversed(v):
        acc = mpf(0)
        out = [mpf(0)]
        for k in range(1, n + 1):
            acc += vals[k] / mpf(k) ** a
            out.append(acc)
        vals = out
    return vals


@lru_cache(maxsize=256)
def _tail_expansion(v: tuple, dps: int, J: int, N0: int) -> tuple[dict, object]:
    """(expansion, constant) of S_v(N) for large N."""
    with mp.workdps(dps):
        if not v:
            return {(0, 0): mpf(1)}, mpf(0)
        inner, c_inner = _tail_expansion(v[1:], dps, J, N0)
        a = v[0]
        g = dict(inner)
        if c_inner:
            g[(0, 0)] = g.get((0, 0), 0) + c_inner
        bern = [mpmath.bernoulli(2 * p) / mpmath.factorial(2 * p) for p in range(J // 2 + 2)]
        out: dict = {}

        def add(d: dict, scale):
            for key, c in d.items():
                if key[1] <= J and c:
                    out[key] = out.get(key, 0) + c * scale

        for (i, j), c in g.items():
            s = j + a
            if s - 1 > J:
                continue
            add({k: mpf(q.numerator) / q.denominator for k, q in _antiderivative(i, s).items()}, c)
            add({(i, s): mpf(1) / 2}, c)
            d = _derivative({(i, s): mpf(1)})
            p = 1
            while d and min(k[1] for k in d) <= J:
                add(d, c * bern[p])
                d = _derivative(_derivative(d))
                p += 1
        const = _direct(v, N0)[N0] - _expansion_value(out, mpf(N0))
        return out, const


def _expansion_value(exp: dict, z):
    L = mpmath.log(z)
    w = 1 / z
    return sum(c * L**i * w**s for (i, s), c in exp.items())


def _tail_values(v: tuple, N, m: int, cfg, ctx) -> list:
    """S_v(N + j) for j = 0..m."""
    if not v:
        return [mpf(1)] * (m + 1)
    inner = _tail_values(v[1:], N, m, cfg, ctx)
    exp, const = _tail_expansion(v, *ctx)
    vals = [None] * (m + 1)
    vals[m] = _expansion_value(exp, N + m) + const
    for j in range(m, 0, -1):
        vals[j - 1] = vals[j] - inner[j] / (N + j) ** v[0]
    return vals


def _tail_value(v: tuple, N, cfg: ContinuationConfig, extra_shift: int = 0):
    if not _positive(v):
        raise UnsupportedSumError("the tail route needs positive indices")
    z_min = cfg.threshold()
    m = _shift_for(N, z_min, extra_shift)
    dps = cfg.digits + GUARD
    J = _tail_order(z_min, dps)
    N0 = max(math.ceil(z_min), 2)
    return _tail_values(v, N, m, cfg, (dps, J, N0))[0], m
