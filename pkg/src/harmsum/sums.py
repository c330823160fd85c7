"""Nested harmonic sums at integer argument.

A sum is addressed by its index vector, a tuple of nonzero signed integers
``(a1, ..., ad)``::

    S_{a1,...,ad}(N) = sum_{k=1}^N sign(a1)^k / k^|a1| * S_{a2,...,ad}(k),   S_{}(k) = 1

Everything here is exact (``fractions.Fraction``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian
from typing import Iterable, Sequence

IndexVector = tuple  # tuple[int, ...]

_TEXT_RE = re.compile(r"^\s*S\s*\[([^\]]*)\]\s*\(\s*(\d+)\s*\)\s*$")


class IndexVectorError(ValueError):
    """Raised for malformed index vectors."""


def as_index_vector(v: Iterable[int] | str) -> tuple[int, ...]:
    """Validate and normalise ``v`` into a tuple of nonzero ints.

    Accepts an iterable of ints or the canonical text form ``"-3,1,-2"``.
    """
    if isinstance(v, str):
        parts = [p.strip() for p in v.strip().strip("()[]").split(",")]
        try:
            v = [int(p) for p in parts if p]
        except ValueError as exc:
            raise IndexVectorError(f"malformed index vector {v!r}") from exc
    out = tuple(int(a) for a in v)
    if not out:
        raise IndexVectorError("index vector must have at least one entry")
    if any(a == 0 for a in out):
        raise IndexVectorError(f"zero index in {out}")
    return out


def format_indices(v: Sequence[int]) -> str:
    return ",".join(str(a) for a in v)


def format_sum(v: Sequence[int], arg: object = "N") -> str:
    return f"S[{format_indices(v)}]({arg})"


def weight(v: Sequence[int]) -> int:
    return sum(abs(a) for a in v)


def depth(v: Sequence[int]) -> int:
    return len(v)


def wedge(a: int, b: int) -> int:
    """The merged index a^b = sign(a) sign(b) (|a| + |b|)."""
    s = (1 if a > 0 else -1) * (1 if b > 0 else -1)
    return s * (abs(a) + abs(b))


def letter_key(a: int) -> tuple[int, int]:
    """Canonical letter order: by magnitude, positive before negative."""
    return (abs(a), 1 if a < 0 else 0)


def word_key(v: Sequence[int]) -> tuple:
    return tuple(letter_key(a) for a in v)


def eval_table(v: Sequence[int], N: int) -> list[Fraction]:
    """Return ``[S_v(0), S_v(1), ..., S_v(N)]`` exactly.

    The nested definition is evaluated innermost-first, one cumulative pass
    per index, so the cost is O(depth * N) instead of O(N^depth).
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    tail = [Fraction(1)] * (N + 1)
    for a in reversed(v):
        m = abs(a)
        neg = a < 0
        acc = Fraction(0)
        cur = [Fraction(0)] * (N + 1)
        for k in range(1, N + 1):
            term = tail[k] / k**m
            acc += -term if (neg and k % 2) else term
            cur[k] = acc
        tail = cur
    return tail


@lru_cache(maxsize=8192)
def _eval_cached(v: tuple[int, ...], N: int) -> Fraction:
    return eval_table(v, N)[N]


def eval_exact(v: Iterable[int] | str, N: int) -> Fraction:
    """Exact value of S_v(N) for a positive integer N."""
    if not isinstance(N, int) or isinstance(N, bool):
        raise TypeError("N must be an integer")
    if N <= 0:
        raise ValueError(f"N must be >= 1, got {N}")
    return _eval_cached(as_index_vector(v), N)


def eval_text(text: str) -> Fraction:
    """Evaluate a literal such as ``"S[2,1](10)"``."""
    m = _TEXT_RE.match(text)
    if not m:
        raise ValueError(f"not a sum literal: {text!r}")
    return eval_exact(m.group(1), int(m.group(2)))


def compositions(w: int) -> list[tuple[int, ...]]:
    """All compositions of ``w`` into positive parts."""
    if w == 0:
        return [()]
    out = []
    for first in range(1, w + 1):
        for rest in compositions(w - first):
            out.append((first,) + rest)
    return out


def enumerate_sums(w: int, exclude_minus_one: bool = False) -> list[tuple[int, ...]]:
    """Every index vector of weight exactly ``w`` in canonical order."""
    if w < 1:
        raise ValueError("weight must be >= 1")
    out = []
    for comp in compositions(w):
        for signs in _cartesian((1, -1), repeat=len(comp)):
            v = tuple(s * c for s, c in zip(signs, comp))
            if exclude_minus_one and -1 in v:
                continue
            out.append(v)
    out.sort(key=word_key)
    return out


@dataclass(frozen=True)
class LimitClass:
    """Behaviour of S_v(N) as N -> infinity.

    ``kind`` is ``"finite"`` (``value`` holds the limit as an mpf at the
    requested precision) or ``"log-divergent"`` (``power`` is the number of
    leading unit indices, the exponent m of ln^m N).
    """

    kind: str
    power: int = 0
    value: object = None


def leading_ones(v: Sequence[int]) -> int:
    m = 0
    for a in v:
        if a != 1:
            break
        m += 1
    return m


def limit_value(v: Iterable[int] | str, dps: int = 30) -> LimitClass:
    v = as_index_vector(v)
    m = leading_ones(v)
    if m:
        return LimitClass("log-divergent", power=m)
    from .specfun.hpl import sum_at_infinity

    return LimitClass("finite", value=sum_at_infinity(v, dps))
