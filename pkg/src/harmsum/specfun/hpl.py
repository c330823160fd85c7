"""Harmonic polylogarithms on [0, 1] to arbitrary precision.

Every H_w(x), letters in {0, 1, -1}, is carried as two generalised power
series

* around x = 0:  sum_{j,n} a[j][n] x^n ln^j(x)
* around x = 1:  sum_{j,n} b[j][n] t^n ln^j(t),   t = 1 - x

built letter by letter from the iterated-integral recursion
H_{a,w}(x) = int_0^x f_a(y) H_w(y) dy with f_0 = 1/y, f_1 = 1/(1-y),
f_{-1} = 1/(1+y).  The integration constant of the x = 1 expansion is fixed
by matching both series at x = 1/2, where each converges like 2^-n.  No table
of multiple zeta values is needed; they fall out of the matching.
"""
from __future__ import annotations

import math
import threading
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf

LETTERS = (0, 1, -1)
GUARD_DIGITS = 12


class DomainError(ValueError):
    """Argument outside the supported domain (or a divergent endpoint)."""


def series_length(dps: int) -> int:
    # both expansions converge like 2^-n at the matching point; the
    # polynomial prefactors (n^w, ln^w n) are absorbed by the slack
    return int(math.ceil((dps + GUARD_DIGITS) * math.log2(10))) + 40


def _zero(J: int, M: int) -> list[list]:
    return [[mpf(0)] * (M + 1) for _ in range(J + 1)]


def _mul_geometric(c: list[list], r) -> list[list]:
    """Multiply a series by 1/(1 - r y)."""
    out = []
    for row in c:
        acc = mpf(0)
        new = []
        for v in row:
            acc = v + r * acc
            new.append(acc)
        out.append(new)
    return out


def _primitive(d: list[list], offset: int, M: int) -> list[list]:
    """Regularised primitive of sum d[j][n] y^(n+offset) ln^j(y).

    ``offset`` is 0 or -1.  The y^-1 ln^j terms integrate to
    ln^(j+1)/(j+1); all other terms vanish at y = 0.
    """
    J = len(d) - 1
    out = _zero(J + 1, M)
    fact = [math.factorial(i) for i in range(J + 2)]
    for j in range(J + 1):
        row = d[j]
        for n, v in enumerate(row):
            if not v:
                continue
            m = n + offset
            if m == -1:
                out[j + 1][0] += v / (j + 1)
                continue
            p = m + 1
            if p > M:
                break
            # int y^m L^j = y^(m+1) sum_i (-1)^i j!/(j-i)! L^(j-i) / (m+1)^(i+1)
            inv = mpf(1) / p
            scale = v * inv
            for i in range(j + 1):
                term = scale * (fact[j] // fact[j - i])
                out[j - i][p] += -term if i % 2 else term
                scale *= inv
    while len(out) > 1 and not any(out[-1]):
        out.pop()
    return out


def eval_series(c: list[list], y, logy=None, cutoff_bits: int | None = None):
    """Evaluate sum c[j][n] y^n ln^j(y); ``logy`` may be supplied precomputed."""
    if y == 0:
        if any(any(row) for row in c[1:]):
            raise DomainError("logarithmic singularity at the expansion point")
        return c[0][0]
    M = len(c[0]) - 1
    if cutoff_bits is None:
        cutoff_bits = mp.prec + 20
    # terms below 2^-cutoff_bits relative to the leading one are dropped
    bits_per_term = -mpmath.mag(y) + 1
    if bits_per_term > 2:
        nmax = min(M, cutoff_bits // (bits_per_term - 1) + 8)
    else:
        nmax = M
    total = 0
    L = None
    for j, row in enumerate(c):
        acc = mpf(0)
        for n in range(nmax, -1, -1):
            acc = acc * y + row[n]
        if j == 0:
            total = acc
        else:
            if L is None:
                L = logy if logy is not None else mpmath.log(y)
            total += acc * L**j
    return total


class HplEngine:
    """Series data for HPL words at one working precision (``dps`` digits).

    Instances are cheap to share; per-word data is computed on first use
    under a lock and never mutated afterwards.
    """

    def __init__(self, dps: int):
        self.dps = dps
        self.M = series_length(dps)
        self._words: dict[tuple, tuple] = {}
        self._lock = threading.RLock()
        with mp.workdps(dps + GUARD_DIGITS):
            self.half = mpf(1) / 2
            self.log_half = mpmath.log(self.half)
            one = _zero(0, self.M)
            one[0][0] = mpf(1)
        self._words[()] = (one, one, mpf(1))

    def series(self, word: Sequence[int]) -> tuple[list[list], list[list], object]:
        """Return (series at 0, series at 1, regularised value at 1)."""
        word = tuple(word)
        hit = self._words.get(word)
        if hit is not None:
            return hit
        if any(a not in LETTERS for a in word):
            raise ValueError(f"HPL letters must be 0, 1 or -1: {word}")
        with self._lock, mp.workdps(self.dps + GUARD_DIGITS):
            hit = self._words.get(word)
            if hit is None:
                hit = self._build(word)
                self._words[word] = hit
        return hit

    def _build(self, word: tuple) -> tuple:
        a, rest = word[0], word[1:]
        s0, s1, _ = self.series(rest)
        M = self.M
        # expansion around x = 0
        if a == 0:
            new0 = _primitive(s0, -1, M)
        else:
            new0 = _primitive(_mul_geometric(s0, mpf(1) if a == 1 else mpf(-1)), 0, M)
        # expansion around x = 1 in t = 1 - x:  H_{a,w} = K - P(t), P' = f_a(1-t) H_w
        if a == 0:
            P = _primitive(_mul_geometric(s1, mpf(1)), 0, M)
        elif a == 1:
            P = _primitive(s1, -1, M)
        else:
            g = _mul_geometric(s1, self.half)
            g = [[v * self.half for v in row] for row in g]
            P = _primitive(g, 0, M)
        K = eval_series(new0, self.half, self.log_half) + eval_series(P, self.half, self.log_half)
        new1 = [[-v for v in row] for row in P]
        new1[0][0] += K
        return new0, new1, K

    def value_at_one(self, word: Sequence[int]):
        word = tuple(word)
        if word and word[0] == 1:
            raise DomainError(f"H{list(word)}(1) diverges")
        return self.series(word)[2]

    def evaluate(self, word: Sequence[int], x):
        word = tuple(word)
        x = mpf(x)
        if not 0 <= x <= 1:
            raise DomainError(f"x = {x} outside [0, 1]")
        if x == 1:
            return self.value_at_one(word)
        s0, s1, _ = self.series(word)
        with mp.workdps(self.dps + GUARD_DIGITS):
            if x <= 0.5:
                if x == 0 and word and word[-1] == 0:
                    raise DomainError(f"H{list(word)}(0) diverges")
                return eval_series(s0, x)
            return eval_series(s1, 1 - x)


_ENGINES: dict[int, HplEngine] = {}
_ENGINES_LOCK = threading.Lock()


def engine(dps: int | None = None) -> HplEngine:
    dps = int(dps or mp.dps)
    eng = _ENGINES.get(dps)
    if eng is None:
        with _ENGINES_LOCK:
            eng = _ENGINES.setdefault(dps, HplEngine(dps))
    return eng


def hpl(word: Iterable[int], x, dps: int | None = None):
    """H_word(x) for x in [0, 1].

    ``word`` is a sequence over {0, 1, -1}; H_0 = ln x, H_1 = -ln(1-x),
    H_-1 = ln(1+x).  Divergent endpoint values raise :class:`DomainError`.
    """
    word = tuple(word)
    if not word:
        raise ValueError("empty HPL word")
    dps = int(dps or mp.dps)
    val = engine(dps).evaluate(word, x)
    return +val if mp.dps >= dps else val


def _s_to_z(v: tuple) -> list[tuple]:
    """Non-strict nested sums as a signed list of strict ones (contract neighbours)."""
    from ..sums import wedge

    if len(v) == 1:
        return [v]
    out = []
    for tail in _s_to_z(v[1:]):
        out.append((v[0],) + tail)
        out.append((wedge(v[0], tail[0]),) + tail[1:])
    return out


def z_word(z: Sequence[int]) -> tuple[int, tuple]:
    """Strict sum at infinity -> (sign, HPL word) with Z(inf) = sign * H_word(1)."""
    word = []
    prod_sign = 1
    ones = 0
    for a in z:
        prod_sign *= 1 if a > 0 else -1
        word.extend([0] * (abs(a) - 1))
        word.append(prod_sign)
        ones += prod_sign == 1
    sign = (-1) ** (len(z) + ones)
    return sign, tuple(word)


def sum_at_infinity(v: Sequence[int], dps: int = 30):
    """lim_{N->inf} S_v(N) for a convergent index vector (leading index != 1)."""
    v = tuple(v)
    if v[0] == 1:
        raise DomainError(f"S{list(v)}(N) diverges as N -> infinity")
    eng = engine(dps)
    with mp.workdps(dps + GUARD_DIGITS):
        total = mpf(0)
        for z in _s_to_z(v):
            sign, word = z_word(z)
            total += sign * eng.value_at_one(word)
    with mp.workdps(dps):
        return +total
