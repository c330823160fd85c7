"""Quasi-shuffle algebra of harmonic sums.

Products of sums, Euler's two-index relation, and reduction of any sum to a
polynomial in the Lyndon-word basis.  All coefficients are exact rationals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .sums import (
    as_index_vector,
    enumerate_sums,
    eval_exact,
    format_sum,
    weight,
    wedge,
    word_key,
)

Word = tuple  # tuple[int, ...]
Monomial = tuple  # sorted tuple of Words


def _monomial(factors: Iterable[Sequence[int]]) -> tuple:
    return tuple(sorted((tuple(f) for f in factors), key=word_key))


class SumPolynomial:
    """Rational-coefficient polynomial in harmonic sums.

    Terms map a monomial (a sorted tuple of index vectors, possibly with
    repeats) to its coefficient.  The empty monomial is the constant 1.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None):
        self.terms: dict[tuple, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                key = _monomial(mono)
                self.terms[key] = self.terms.get(key, Fraction(0)) + c
                if not self.terms[key]:
                    del self.terms[key]

    @classmethod
    def sum(cls, v: Sequence[int], coeff=1) -> "SumPolynomial":
        return cls({(tuple(v),): Fraction(coeff)})

    @classmethod
    def constant(cls, c) -> "SumPolynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def from_linear(cls, lin: Mapping[Word, Fraction]) -> "SumPolynomial":
        return cls({(w,): c for w, c in lin.items()})

    def __add__(self, other: "SumPolynomial") -> "SumPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return SumPolynomial(out)

    def __neg__(self) -> "SumPolynomial":
        return SumPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SumPolynomial") -> "SumPolynomial":
        return self + (-other)

    def scale(self, c) -> "SumPolynomial":
        c = Fraction(c)
        return SumPolynomial({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SumPolynomial):
            return self.scale(other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _monomial(m1 + m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return SumPolynomial(out)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return isinstance(other, SumPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def monomial_weights(self) -> set[int]:
        return {sum(weight(f) for f in m) for m in self.terms}

    def words(self) -> set[Word]:
        return {f for m in self.terms for f in m}

    def evaluate(self, N: int) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            val = c
            for f in mono:
                val *= eval_exact(f, N)
            total += val
        return total

    def evaluate_with(self, value_of) -> object:
        """Evaluate with a user-supplied ``value_of(word)`` (e.g. continued sums)."""
        total = 0
        for mono, c in self.terms.items():
            val = c
            for f in mono:
                val = val * value_of(f)
            total = total + val
        return total

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(
            self.terms.items(),
            key=lambda it: (-len(it[0]), [word_key(f) for f in it[0]]),
        )

    def to_json(self) -> list[dict]:
        return [
            {"coeff": f"{c.numerator}/{c.denominator}", "factors": [list(f) for f in m]}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list[dict] | str) -> "SumPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({tuple(tuple(f) for f in t["factors"]): Fraction(t["coeff"]) for t in data})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = "*".join(
                format_sum(f) + (f"^{k}" if k > 1 else "")
                for f, k in _powers(mono)
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = factors
            else:
                body = f"{a}*{factors}"
            parts.append(f"{sign} {body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def _powers(mono: tuple) -> list[tuple[Word, int]]:
    out: list[list] = []
    for f in mono:
        if out and out[-1][0] == f:
            out[-1][1] += 1
        else:
            out.append([f, 1])
    return [(f, k) for f, k in out]


@lru_cache(maxsize=None)
def _qs(u: Word, v: Word) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    a, b = u[0], v[0]
    acc: dict[Word, int] = {}
    for w, c in _qs(u[1:], v):
        acc[(a,) + w] = acc.get((a,) + w, 0) + c
    for w, c in _qs(u, v[1:]):
        acc[(b,) + w] = acc.get((b,) + w, 0) + c
    # non-strict nesting: the merged-head term enters with a minus sign
    ab = wedge(a, b)
    for w, c in _qs(u[1:], v[1:]):
        acc[(ab,) + w] = acc.get((ab,) + w, 0) - c
    return tuple((w, c) for w, c in acc.items() if c)


def quasi_shuffle(u: Sequence[int], v: Sequence[int]) -> dict[Word, int]:
    """S_u * S_v as a linear combination of single sums (integer coefficients)."""
    return dict(_qs(tuple(u), tuple(v)))


def product(u: Sequence[int], v: Sequence[int]) -> SumPolynomial:
    u, v = as_index_vector(u), as_index_vector(v)
    return SumPolynomial.from_linear(quasi_shuffle(u, v))


def product_many(words: Sequence[Sequence[int]]) -> dict[Word, int]:
    acc: dict[Word, int] = {(): 1}
    for w in words:
        nxt: dict[Word, int] = {}
        for x, c in acc.items():
            for y, d in _qs(x, tuple(w)):
                nxt[y] = nxt.get(y, 0) + c * d
        acc = {k: c for k, c in nxt.items() if c}
    return acc


@dataclass(frozen=True)
class EulerReport:
    a: int
    b: int
    N: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def euler_pair(a: int, b: int, N: int) -> EulerReport:
    """Check S_{a,b} + S_{b,a} = S_a S_b + S_{a^b} exactly at N."""
    if a == 0 or b == 0:
        raise ValueError("indices must be nonzero")
    lhs = eval_exact((a, b), N) + eval_exact((b, a), N)
    rhs = eval_exact((a,), N) * eval_exact((b,), N) + eval_exact((wedge(a, b),), N)
    return EulerReport(a, b, N, lhs, rhs)


# -- Lyndon words -----------------------------------------------------------


def is_lyndon(w: Sequence[int]) -> bool:
    k = word_key(w)
    return bool(k) and all(k < k[i:] for i in range(1, len(k)))


def lyndon_factorization(w: Sequence[int]) -> list[Word]:
    """Duval's algorithm; returns non-increasing Lyndon factors."""
    s = list(w)
    key = [word_key((a,))[0] for a in s]
    n, i, out = len(s), 0, []
    while i < n:
        j, k = i + 1, i
        while j < n and key[k] <= key[j]:
            k = i if key[k] < key[j] else k + 1
            j += 1
        while i <= k:
            out.append(tuple(s[i : i + j - k]))
            i += j - k
    return out


def lyndon_words(w: int, exclude_minus_one: bool = False) -> list[Word]:
    return [v for v in enumerate_sums(w, exclude_minus_one) if is_lyndon(v)]


@lru_cache(maxsize=None)
def _reduce(w: Word) -> SumPolynomial:
    if is_lyndon(w):
        return SumPolynomial.sum(w)
    factors = lyndon_factorization(w)
    expansion = product_many(factors)
    lead = expansion.pop(w)
    wk = word_key(w)
    result = SumPolynomial({tuple(factors): Fraction(1)})
    for u, c in expansion.items():
        # triangularity: every other term is shallower or lexicographically smaller
        assert len(u) < len(w) or word_key(u) < wk, (w, u)
        result = result - _reduce(u).scale(c)
    return result.scale(Fraction(1, lead))


def algebraic_reduce(v: Iterable[int] | str) -> SumPolynomial:
    """Express S_v as a polynomial in Lyndon-basis sums of the same weight.

    Uses the triangular structure of products of Lyndon factorisations: the
    product of the factors of ``v`` contains ``v`` itself once per
    permutation of equal factors and otherwise only smaller words, so the
    system is solved by back substitution.
    """
    return _reduce(as_index_vector(v))


def reduce_polynomial(p: SumPolynomial) -> SumPolynomial:
    out = SumPolynomial()
    for mono, c in p.terms.items():
        term = SumPolynomial.constant(c)
        for f in mono:
            term = term * _reduce(f)
        out = out + term
    return out


def basis_census(w: int, exclude_minus_one: bool = False) -> dict[str, int]:
    total = len(enumerate_sums(w, exclude_minus_one))
    return {"total": total, "algebraic_basis_count": len(lyndon_words(w, exclude_minus_one))}


def irreducible_count_by_rank(w: int, exclude_minus_one: bool = False, prime: int = 2_147_483_647) -> int:
    """Independent count of algebraically irreducible sums of weight ``w``.

    Spans every product S_u * S_v (both factors of positive weight, total
    weight ``w``) in the space of weight-``w`` sums and returns
    ``#sums - rank`` (rank taken modulo a large prime).
    """
    words = enumerate_sums(w, exclude_minus_one)
    col = {v: i for i, v in enumerate(words)}
    rows = []
    for wu in range(1, w // 2 + 1):
        for u in enumerate_sums(wu, exclude_minus_one):
            for v in enumerate_sums(w - wu, exclude_minus_one):
                row = {}
                for x, c in quasi_shuffle(u, v).items():
                    row[col[x]] = c % prime
                rows.append(row)
    return len(words) - _rank_mod_p(rows, len(words), prime)


def _rank_mod_p(rows: list[dict[int, int]], ncols: int, p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = {k: v % p for k, v in row.items() if v % p}
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = pow(row[lead], p - 2, p)
                pivots[lead] = {k: v * inv % p for k, v in row.items()}
                break
            piv = pivots[lead]
            f = row[lead]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)
