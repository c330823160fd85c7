"""Kernel functions as linear combinations of harmonic polylogarithms.

Polylogarithms, Nielsen integrals, the auxiliary integrals A1..A3 and
products of all of these are rewritten as HplCombination objects (word ->
numeric coefficient, the empty word being the constant term).  Numerical
evaluation then reduces to the series data of :mod:`harmsum.specfun.hpl`.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping, Sequence

import mpmath
from mpmath import mp, mpf

from . import constants as C
from .hpl import GUARD_DIGITS, DomainError, engine, eval_series

ARGS = ("x", "-x", "1-x", "x^2")


@lru_cache(maxsize=None)
def _shuffle(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict[tuple, int] = {}
    for w, c in _shuffle(u[1:], v):
        acc[(u[0],) + w] = acc.get((u[0],) + w, 0) + c
    for w, c in _shuffle(u, v[1:]):
        acc[(v[0],) + w] = acc.get((v[0],) + w, 0) + c
    return tuple(acc.items())


def shuffle(u: Sequence[int], v: Sequence[int]) -> dict[tuple, int]:
    """H_u * H_v = sum of H over all shuffles of u and v."""
    return dict(_shuffle(tuple(u), tuple(v)))


class HplCombination:
    """Finite linear combination of HPL words with numeric coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        self.terms = {tuple(w): c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def word(cls, w: Sequence[int], c=1) -> "HplCombination":
        return cls({tuple(w): c})

    @classmethod
    def const(cls, c) -> "HplCombination":
        return cls({(): c})

    def __add__(self, other):
        if not isinstance(other, HplCombination):
            other = HplCombination.const(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return HplCombination(out)

    __radd__ = __add__

    def __neg__(self):
        return HplCombination({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, HplCombination) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HplCombination):
            return HplCombination({w: c * other for w, c in self.terms.items()})
        out: dict[tuple, object] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                for w, m in _shuffle(u, v):
                    out[w] = out.get(w, 0) + a * b * m
        return HplCombination(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = HplCombination.const(1)
        for _ in range(k):
            out = out * self
        return out

    def prepend(self, letter: int) -> "HplCombination":
        """int_0^x f_letter(y) (self)(y) dy."""
        return HplCombination({(letter,) + w: c for w, c in self.terms.items()})

    def negate_argument(self) -> "HplCombination":
        """Rewrite g(-x) in terms of H(x); words must not end in 0."""
        out = {}
        for w, c in self.terms.items():
            if w and w[-1] == 0:
                raise DomainError("cannot negate the argument of a word with trailing zeros")
            sign = (-1) ** sum(1 for a in w if a)
            out[tuple(-a for a in w)] = sign * c
        return HplCombination(out)

    def weight(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def key(self) -> tuple:
        return tuple(sorted((w, mpmath.nstr(c, 40) if not isinstance(c, int) else str(c)) for w, c in self.terms.items()))

    def series(self, dps: int) -> tuple[list[list], list[list]]:
        """Combined expansions (around x = 0 and around x = 1)."""
        eng = engine(dps)
        with mp.workdps(dps + GUARD_DIGITS):
            J0 = J1 = 0
            parts = []
            for w, c in self.terms.items():
                s0, s1, _ = eng.series(w)
                parts.append((mpf(c), s0, s1))
                J0 = max(J0, len(s0) - 1)
                J1 = max(J1, len(s1) - 1)
            M = eng.M
            a = [[mpf(0)] * (M + 1) for _ in range(J0 + 1)]
            b = [[mpf(0)] * (M + 1) for _ in range(J1 + 1)]
            for c, s0, s1 in parts:
                for j, row in enumerate(s0):
                    tgt = a[j]
                    for n, v in enumerate(row):
                        if v:
                            tgt[n] += c * v
                for j, row in enumerate(s1):
                    tgt = b[j]
                    for n, v in enumerate(row):
                        if v:
                            tgt[n] += c * v
        return a, b

    def evaluate(self, x, dps: int | None = None):
        dps = int(dps or mp.dps)
        eng = engine(dps)
        with mp.workdps(dps + GUARD_DIGITS):
            total = mpf(0)
            for w, c in self.terms.items():
                total += mpf(c) * (eng.evaluate(w, x) if w else 1)
        return total

    def __repr__(self):
        return " + ".join(f"{mpmath.nstr(mpf(c), 8)}*H{list(w)}" for w, c in self.terms.items()) or "0"


# -- builders ----------------------------------------------------------------


def H(word: Sequence[int], arg: str = "x") -> HplCombination:
    comb = HplCombination.word(tuple(word))
    if arg == "x":
        return comb
    if arg == "-x":
        return comb.negate_argument()
    raise DomainError(f"H(..., {arg}) is not supported")


def log_of(arg: str) -> HplCombination:
    """ln(arg) for arg in x, 1-x, 1+x."""
    if arg == "x":
        return H((0,))
    if arg == "1-x":
        return -H((1,))
    if arg in ("1+x", "x+1"):
        return H((-1,))
    raise DomainError(f"ln({arg}) is not supported")


def li(k: int, arg: str = "x") -> HplCombination:
    """Li_k at x, -x, 1-x or x^2."""
    if k < 1:
        raise ValueError("Li_k needs k >= 1")
    if arg == "x":
        return H((0,) * (k - 1) + (1,))
    if arg == "-x":
        return -H((0,) * (k - 1) + (-1,))
    if arg == "x^2":
        return (li(k, "x") + li(k, "-x")) * (2 ** (k - 1))
    if arg == "1-x":
        # d/dx Li_k(1-x) = -Li_{k-1}(1-x)/(1-x),  Li_1(1-x) = -ln x
        out = -H((0,))
        for m in range(2, k + 1):
            out = C.value(f"zeta({m})") - out.prepend(1)
        return out
    raise DomainError(f"Li_{k}({arg}) is not supported")


def nielsen_comb(p: int, n: int, arg: str = "x") -> HplCombination:
    """S_{p,n} at x, -x (any p, n) or 1-x (p = 1)."""
    if p < 1 or n < 1:
        raise ValueError("Nielsen indices must be >= 1")
    if arg == "x":
        return H((0,) * p + (1,) * n)
    if arg == "-x":
        return H((0,) * p + (-1,) * n) * ((-1) ** n)
    if arg == "1-x":
        if n == 1:
            return li(p + 1, "1-x")
        if p == 1:
            # S_{1,n}(1-x) = zeta(n+1) - (-1)^n H_{1,0^n}(x)
            return C.value(f"zeta({n + 1})") - H((1,) + (0,) * n) * ((-1) ** n)
    raise DomainError(f"S_{{{p},{n}}}({arg}) is not supported")


def aux_comb(i: int, arg: str = "x") -> HplCombination:
    """The auxiliary integrals A1, A2, A3 as HPL combinations."""
    if i == 1:
        if arg not in ("x", "-x"):
            raise DomainError("A1 supports x and -x")
        return (li(2, arg) ** 2).prepend(0)
    if i == 2:
        if arg == "x":
            return (log_of("1-x") * nielsen_comb(1, 2, "x")).prepend(0)
        if arg == "-x":
            return (log_of("1+x") * nielsen_comb(1, 2, "-x")).prepend(0)
        raise DomainError("A2 supports x and -x")
    if i == 3:
        if arg != "x":
            raise DomainError("A3 supports x only")
        return (li(4, "1-x") - C.value("zeta(4)")).prepend(0)
    raise ValueError("auxiliary index must be 1, 2 or 3")


# -- pointwise evaluation ---------------------------------------------------


def _as_unit_interval(x) -> tuple[object, str]:
    x = mpf(x)
    if not -1 <= x <= 1:
        raise DomainError(f"argument {x} outside [-1, 1]")
    if x < 0:
        return -x, "-x"
    return x, "x"


def polylog(k: int, x, dps: int | None = None):
    """Li_k(x) for real x in [-1, 1]."""
    if not 1 <= k <= 8:
        raise ValueError("k out of range")
    dps = int(dps or mp.dps)
    x = mpf(x)
    if x == 1:
        return C.value(f"zeta({k})", dps)
    if x == -1:
        return -(1 - mpf(2) ** (1 - k)) * C.value(f"zeta({k})", dps)
    y, arg = _as_unit_interval(x)
    with mp.workdps(dps + GUARD_DIGITS):
        comb = li(k, arg)
    return comb.evaluate(y, dps)


def nielsen(p: int, n: int, x, dps: int | None = None):
    """Nielsen generalised polylogarithm S_{p,n}(x), x in [-1, 1]."""
    if p < 1 or n < 1:
        raise ValueError("Nielsen indices must be >= 1")
    dps = int(dps or mp.dps)
    y, arg = _as_unit_interval(x)
    with mp.workdps(dps + GUARD_DIGITS):
        comb = nielsen_comb(p, n, arg)
    return comb.evaluate(y, dps)


def nielsen_by_quadrature(p: int, n: int, x, dps: int | None = None):
    """S_{p,n}(x) straight from its defining log-kernel integral."""
    from .quadrature import integrate

    dps = int(dps or mp.dps)
    with mp.workdps(dps + 10):
        x = mpf(x)
        pref = mpf(-1) ** (p + n + 1) / (math.factorial(p - 1) * math.factorial(n))

        def f(z, t, lz, lt):
            return lz ** (p - 1) * mpmath.log1p(-x * z) ** n / z

        val, _ = integrate(f, dps + 10)
        return pref * val


def aux_A(i: int, x, dps: int | None = None):
    """A_i(x): i = 1 on [-1, 1], i = 2, 3 on [0, 1] (A2 also on [-1, 0))."""
    dps = int(dps or mp.dps)
    x = mpf(x)
    if i == 3 and x < 0:
        raise DomainError("A3 is only defined here for x in [0, 1]")
    y, arg = _as_unit_interval(x)
    with mp.workdps(dps + GUARD_DIGITS):
        comb = aux_comb(i, arg)
    return comb.evaluate(y, dps)


def hpl_value(word: Sequence[int], x, dps: int | None = None):
    from .hpl import hpl

    return hpl(word, x, dps)


def s1k_of_1mx(k: int, x, dps: int | None = None):
    """S_{1,k}(1-x) from its closed form in Li_m(x), ln x, ln(1-x), zeta values.

    Implemented for k = 2, 3, 4 and x in (0, 1); at x = 1 the value is 0.
    """
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")
    dps = int(dps or mp.dps)
    with mp.workdps(dps + 10):
        x = mpf(x)
        if x == 1:
            return mpf(0)
        if not 0 < x < 1:
            raise DomainError("S_{1,k}(1-x) closed form needs 0 < x < 1")
        L, L1 = mpmath.log(x), mpmath.log1p(-x)
        Li = lambda m: mpmath.polylog(m, x)  # noqa: E731
        if k == 2:
            val = -Li(3) + L * Li(2) + L1 * L**2 / 2 + mpmath.zeta(3)
        elif k == 3:
            val = -Li(4) + L * Li(3) - L**2 * Li(2) / 2 - L**3 * L1 / 6 + mpmath.zeta(4)
        else:
            val = (
                -Li(5) + L * Li(4) - L**2 * Li(3) / 2 + L**3 * Li(2) / 6
                + L**4 * L1 / 24 + mpmath.zeta(5)
            )
    return +val


def eval_numerator_at(series_pair, x=None, t=None, logx=None, logt=None):
    """Evaluate combined series at a node given as x (<= 1/2) or t = 1 - x."""
    a, b = series_pair
    if x is not None and x <= 0.5:
        return eval_series(a, x, logx)
    return eval_series(b, t, logt)
