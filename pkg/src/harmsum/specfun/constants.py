"""Named constants at arbitrary precision, cached per precision.

Recognised names::

    zeta(k)      k = 2..12
    ln2, pi, gamma (Euler's constant)
    Li4(1/2), Li5(1/2), Li6(1/2)     also spelled li(k,1/2)
    s6           15/16 ln2 zeta(5) + int_0^1 Li5(z)/(1+z) dz

Every entry records where its value came from.
"""
from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

GUARD = 10


class UnknownConstantError(KeyError):
    pass


@dataclass(frozen=True)
class ConstantValue:
    name: str
    value: object
    digits: int
    provenance: str
    weight: int


_CACHE: dict[tuple[str, int], ConstantValue] = {}
_LOCK = threading.RLock()

_LI_HALF = re.compile(r"^(?:Li(\d)\(1/2\)|li\((\d),\s*1/2\))$")
_ZETA = re.compile(r"^zeta\((\d+)\)$")


def canonical_name(name: str) -> str:
    name = name.replace(" ", "")
    m = _LI_HALF.match(name)
    if m:
        return f"Li{m.group(1) or m.group(2)}(1/2)"
    m = re.match(r"^zeta(\d+)$", name)
    if m:
        return f"zeta({m.group(1)})"
    if name in ("log2", "ln(2)", "log(2)"):
        return "ln2"
    return name


def constant_weight(name: str) -> int:
    name = canonical_name(name)
    m = _ZETA.match(name)
    if m:
        return int(m.group(1))
    m = _LI_HALF.match(name)
    if m:
        return int(m.group(1) or m.group(2))
    if name in ("ln2", "gamma"):
        return 1
    if name == "pi":
        return 1
    if name == "s6":
        return 6
    raise UnknownConstantError(name)


def is_constant_name(name: str) -> bool:
    try:
        constant_weight(name)
    except UnknownConstantError:
        return False
    return True


def _li_half(k: int):
    # sum_n 2^-n n^-k, summed until the terms drop below the working epsilon
    eps = mpf(2) ** (-mp.prec - 4)
    total = mpf(0)
    p = mpf(1)
    n = 0
    while True:
        n += 1
        p /= 2
        term = p / mpf(n) ** k
        total += term
        if term < eps:
            return total


def _s6_by_quadrature(dps: int):
    from .functions import li
    from .quadrature import integrate

    comb = li(5, "x").series(dps + GUARD)
    a, b = comb
    from .hpl import eval_series

    def f(x, t, lx, lt):
        num = eval_series(a, x, lx) if x <= 0.5 else eval_series(b, t, lt)
        return num / (1 + x)

    val, _ = integrate(f, dps + GUARD)
    return val


def s6_by_hpl(dps: int):
    """The same constant from H_{-1,0,0,0,0,1}(1) (independent of quadrature)."""
    from .hpl import engine

    with mp.workdps(dps + GUARD):
        v = engine(dps + GUARD).value_at_one((-1, 0, 0, 0, 0, 1))
        return mpf(15) / 16 * mpmath.log(2) * mpmath.zeta(5) + v


def _compute(name: str, dps: int) -> ConstantValue:
    with mp.workdps(dps + GUARD):
        m = _ZETA.match(name)
        if m:
            k = int(m.group(1))
            if not 2 <= k <= 12:
                raise UnknownConstantError(name)
            return ConstantValue(name, mpmath.zeta(k), dps, "series", k)
        m = _LI_HALF.match(name)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= 8:
                raise UnknownConstantError(name)
            return ConstantValue(name, _li_half(k), dps, "series", k)
        if name == "ln2":
            return ConstantValue(name, mpmath.log(2), dps, "series", 1)
        if name == "pi":
            return ConstantValue(name, +mp.pi, dps, "series", 1)
        if name == "gamma":
            return ConstantValue(name, +mp.euler, dps, "series", 1)
        if name == "s6":
            v = mpf(15) / 16 * mpmath.log(2) * mpmath.zeta(5) + _s6_by_quadrature(dps)
            return ConstantValue(name, v, dps, "quadrature", 6)
    raise UnknownConstantError(name)


def constant(name: str, dps: int | None = None) -> ConstantValue:
    """Registry lookup; values carry ``dps`` + guard digits."""
    dps = int(dps or mp.dps)
    name = canonical_name(name)
    key = (name, dps)
    hit = _CACHE.get(key)
    if hit is None:
        with _LOCK:
            hit = _CACHE.get(key)
            if hit is None:
                hit = _compute(name, dps)
                _CACHE[key] = hit
    return hit


def value(name: str, dps: int | None = None):
    return constant(name, dps).value


DEFAULT_NAMES = (
    "zeta(2)", "zeta(3)", "zeta(4)", "zeta(5)", "zeta(6)",
    "ln2", "Li4(1/2)", "Li5(1/2)", "Li6(1/2)", "s6",
)


def export_json(dps: int, names=DEFAULT_NAMES) -> str:
    rows = []
    for n in names:
        c = constant(n, dps)
        rows.append({"name": c.name, "digits": dps, "value": mpmath.nstr(c.value, dps, strip_zeros=False),
                     "provenance": c.provenance})
    return json.dumps(rows, indent=2)
