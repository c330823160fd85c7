"""Mellin transforms of kernel functions on [0, 1].

An atom is ``numerator(x) / denominator`` with optional plus prescription
and optional alternating weight:

    plain   M[f](N)      = int_0^1 x^N f(x) dx
    plus    M[(f)_+](N)  = int_0^1 (x^N - 1) f(x) dx
    alt     the weight x^N is replaced by (-x)^N = eta x^N

The alternating weight is only ever applied through an explicit parity
``eta``; for integer N it defaults to (-1)^N.

Values of the numerator at the quadrature nodes are cached per kernel, so a
new argument N only costs one pass of x^N over the nodes.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from .specfun.functions import HplCombination
from .specfun.hpl import eval_series
from .specfun.quadrature import QuadratureError, rule

GUARD = 10

DENOMINATORS = (None, "x-1", "1-x", "x+1", "1+x", "x^2-1", "1-x^2")


class NonIntegrableError(ValueError):
    """The atom's integrand is not integrable on (0, 1)."""


@dataclass(frozen=True)
class MellinAtom:
    """``kernel / denominator`` under the Mellin transform.

    ``kernel`` is the numerator as expression text in x; it is compiled into
    HPL form on demand at the requested precision.  ``fixed`` may hold a
    precompiled numerator instead.
    """

    kernel: str
    denominator: str | None = None
    plus: bool = False
    alt: bool = False
    fixed: HplCombination | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.denominator not in DENOMINATORS:
            raise ValueError(f"unsupported denominator {self.denominator!r}")
        if self.plus and not self.vanishes_at_one:
            raise ValueError("the plus prescription needs a denominator that vanishes at x = 1")

    @property
    def vanishes_at_one(self) -> bool:
        return self.denominator in ("x-1", "1-x", "x^2-1", "1-x^2")

    def numerator(self, digits: int) -> HplCombination:
        if self.fixed is not None:
            return self.fixed
        from .expr import compile_kernel

        return compile_kernel(self.kernel, digits)

    def text(self) -> str:
        body = self.kernel if self.denominator is None else f"({self.kernel})/({self.denominator})"
        s = f"M[{body}]" + ("+" if self.plus else "")
        return s + (" alt" if self.alt else "")


def atom(kernel, denominator: str | None = None, plus: bool = False, alt: bool = False) -> MellinAtom:
    """Build an atom from kernel text (e.g. ``"Li5(-x) - ln(x)*Li4(-x)"``) or an HplCombination."""
    if isinstance(kernel, HplCombination):
        return MellinAtom(repr(kernel), denominator, plus, alt, fixed=kernel)
    return MellinAtom(str(kernel), denominator, plus, alt)


@dataclass(frozen=True)
class MellinValue:
    value: object
    N: object
    error: object
    digits: int

    def __float__(self):
        return float(mpmath.re(self.value))


# -- node caches -------------------------------------------------------------


class _KernelNodes:
    """Numerator values (times quadrature weights) on every level of a rule."""

    def __init__(self, numerator: HplCombination, dps: int, decay: float):
        self.rule = rule(dps, decay)
        self.dps = dps
        self.numerator = numerator
        self.levels: list[list] = []
        self._series = None
        self._lock = threading.Lock()

    def _sers(self):
        if self._series is None:
            self._series = self.numerator.series(self.dps)
            a, b = self._series
            # a constant that only survives as rounding noise is dropped, so
            # numerators that vanish at x = 1 stay exactly zero there
            with mp.workdps(self.dps):
                scale = max([abs(v) for v in b[0][:4]] + [mpf(1)])
                cut = mpf(10) ** (-(self.dps - 4)) * scale
                for row in b:
                    if row and abs(row[0]) < cut:
                        row[0] = mpf(0)
        return self._series

    def level(self, k: int) -> list:
        while len(self.levels) <= k:
            with self._lock:
                if len(self.levels) <= k:
                    self.levels.append(self._build(len(self.levels)))
        return self.levels[k]

    def _build(self, k: int) -> list:
        a, b = self._sers()
        lev = self.rule.level(k)
        out = []
        with mp.workdps(self.dps):
            for x, t, lx, lt, w in zip(lev.x, lev.t, lev.logx, lev.logt, lev.w):
                f = eval_series(a, x, lx) if x <= 0.5 else eval_series(b, t, lt)
                out.append(f * w)
        return out

    def behaviour_at_one(self) -> tuple[bool, bool]:
        """(value at 1 is nonzero, has log singularity without t factor)."""
        _, b = self._sers()
        const = b[0][0] != 0
        logs = any(row[0] != 0 for row in b[1:])
        return const, logs


_KERNELS: dict[tuple, _KernelNodes] = {}
_KLOCK = threading.Lock()


def _kernel_nodes(num: HplCombination, dps: int, decay: float) -> _KernelNodes:
    key = (num.key(), dps, round(decay, 3))
    kn = _KERNELS.get(key)
    if kn is None:
        with _KLOCK:
            kn = _KERNELS.setdefault(key, _KernelNodes(num, dps, decay))
    return kn


def _denominator(den, x, t):
    if den is None:
        return 1
    if den == "x-1":
        return -t
    if den == "1-x":
        return t
    if den in ("x+1", "1+x"):
        return 1 + x
    if den == "x^2-1":
        return -t * (1 + x)
    if den == "1-x^2":
        return t * (1 + x)
    if den == "x":
        return x
    raise ValueError(den)


def _is_integer(N) -> bool:
    try:
        return mpmath.im(N) == 0 and mpmath.re(N) == int(mpmath.re(N))
    except (TypeError, ValueError):
        return False


def parity_of(N) -> int:
    return 1 if int(mpmath.re(N)) % 2 == 0 else -1


def mellin(a: MellinAtom, N, digits: int | None = None, eta: int | None = None,
           log_power: int = 0, max_level: int = 10) -> MellinValue:
    """Transform of ``a`` at argument N (real or complex, Re N > -1).

    ``eta`` selects the parity branch for alternating atoms and is required
    when N is not an integer.  ``log_power`` = l inserts ln^l(x), i.e. the
    l-th derivative with respect to N.
    """
    P = int(digits or mp.dps)
    dps = P + GUARD
    with mp.workdps(dps):
        N = mpmath.mpmathify(N)
        reN = mpmath.re(N)
        if reN <= -1:
            raise NonIntegrableError(f"Re N = {mpmath.nstr(reN, 8)} <= -1")
        if a.alt:
            if eta is None:
                if not _is_integer(N):
                    raise ValueError("alternating atom at non-integer N needs an explicit parity eta")
                eta = parity_of(N)
            eta = int(eta)
            if eta not in (1, -1):
                raise ValueError("eta must be +1 or -1")
        else:
            eta = 1
        decay = 1.0
        if not a.plus or reN < 0:
            decay = float(min(1.0, max(reN + 1, 0.05)))
        kn = _kernel_nodes(a.numerator(P), dps, decay)
        _check_integrable(a, kn, eta)
        r = kn.rule
        sub = 1 if a.plus else 0
        tol = mpf(10) ** (-(P + 5))
        total = mpf(0)
        prev = None
        diff = None
        for k in range(max_level + 1):
            lev = r.level(k)
            vals = kn.level(k)
            part = 0
            for x, t, lx, fw in zip(lev.x, lev.t, lev.logx, vals):
                if not fw:
                    continue
                NL = N * lx
                if log_power:
                    # the subtracted constant does not depend on N
                    g = mpmath.exp(NL) * eta * lx**log_power
                elif sub:
                    if eta == 1:
                        g = mpmath.expm1(NL)
                    else:
                        g = -mpmath.exp(NL) - 1
                else:
                    g = mpmath.exp(NL) * eta
                part += g * fw / _denominator(a.denominator, x, t)
            total += part
            est = total * r.step(k)
            if prev is not None:
                diff = abs(est - prev)
                if k >= 3 and diff <= tol * max(1, abs(est)):
                    return MellinValue(est, N, diff, P)
            prev = est
        raise QuadratureError(
            f"{a.text()} at N={mpmath.nstr(N, 8)}: no convergence (difference {mpmath.nstr(diff, 3)})",
            prev, diff,
        )


def _check_integrable(a: MellinAtom, kn: _KernelNodes, eta: int) -> None:
    if a.denominator == "x":
        raise NonIntegrableError("1/x denominators are not integrable at 0")
    if not a.vanishes_at_one:
        return
    const, logs = kn.behaviour_at_one()
    if a.plus and eta == 1:
        return
    if const or logs:
        raise NonIntegrableError(f"{a.text()}: numerator does not vanish at x = 1")


def differentiate(a: MellinAtom, N, l: int = 1, digits: int | None = None, eta: int | None = None) -> MellinValue:
    """d^l/dN^l of the transform, computed as the transform with ln^l(x) inserted."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return mellin(a, N, digits, eta=eta, log_power=l)


def moment(a: MellinAtom, N, digits: int | None = None) -> MellinValue:
    """The simple moment int x^N f(x) dx of the numerator alone."""
    plain = MellinAtom(a.kernel, None, False, False, fixed=a.fixed)
    return mellin(plain, N, digits)


def recursion_step(a: MellinAtom, F_N: MellinValue, digits: int | None = None) -> MellinValue:
    """Advance F(N) -> F(N+1) for a plus atom over x-1 or x+1.

    F^-(N) = int f (x^N - 1)/(x - 1):        F^-(N+1) = F^-(N) + int x^N f
    F^+(N) = int f ((-x)^N - 1)/(x + 1):     F^+(N+1) = F^+(N) + (-1)^(N+1) int x^N f
    """
    if not a.plus or a.denominator not in ("x-1", "x+1"):
        raise ValueError("recursion_step needs a plus atom over x-1 or x+1")
    P = int(digits or F_N.digits)
    N = F_N.N
    m = moment(a, N, P)
    with mp.workdps(P + GUARD):
        if a.denominator == "x-1":
            val = F_N.value + m.value
        else:
            if not a.alt:
                raise ValueError("the x+1 recursion applies to the alternating form")
            val = F_N.value - parity_of(N) * m.value
        return MellinValue(val, N + 1, F_N.error + m.error, P)


def duplicate(k: int, N, digits: int | None = None, variant: str = "corrected") -> dict:
    """Half-argument relation between the Li_k(+-x)/(x+-1) transforms.

    ``variant="corrected"`` checks

        2^(1-k) M[(Li_k(x)/(x-1))_+]((N-1)/2)
          = M[(Li_k(x)/(x-1))_+](N) + M[(Li_k(-x)/(x-1))_+](N)
            - M[Li_k(x)/(x+1)](N) - M[Li_k(-x)/(x+1)](N) - 2^(1-k) int_0^1 Li_k(x^2)/(1+x)

    which follows from y = x^2 and Li_k(x^2) = 2^(k-1) (Li_k(x) + Li_k(-x)).
    ``variant="as_written"`` checks the uncorrected printed form, with the
    1/(x+1) terms subtracted at x^N = 1 and Li_k(x^2)/(x^2-1) on the left.
    Returns both sides and the residual.
    """
    if not 2 <= k <= 6:
        raise ValueError("k must be in 2..6")
    P = int(digits or mp.dps)
    with mp.workdps(P + GUARD):
        N = mpmath.mpmathify(N)
        Nh = (N - 1) / 2
        Lx, Lm = f"Li{k}(x)", f"Li{k}(-x)"
        bnd = mellin(atom(f"Li{k}(x^2)", "1+x"), 0, P)
        if variant == "corrected":
            lhs = mellin(atom(Lx, "x-1", plus=True), Nh, P)
            lhs_v = lhs.value / mpf(2) ** (k - 1)
            terms = [
                mellin(atom(Lx, "x-1", plus=True), N, P),
                mellin(atom(Lm, "x-1", plus=True), N, P),
                mellin(atom(Lx, "x+1"), N, P),
                mellin(atom(Lm, "x+1"), N, P),
            ]
            rhs_v = (terms[0].value + terms[1].value - terms[2].value - terms[3].value
                     - bnd.value / mpf(2) ** (k - 1))
        elif variant == "as_written":
            lhs = mellin(atom(f"Li{k}(x^2)", "x^2-1", plus=True), Nh, P)
            lhs_v = lhs.value / mpf(2) ** (k - 1)
            terms = [
                mellin(atom(Lx, "x-1", plus=True), N, P),
                mellin(atom(Lx, "x+1"), N, P),
                mellin(atom(Lx, "x+1"), 0, P),
                mellin(atom(Lm, "x-1", plus=True), N, P),
                mellin(atom(Lm, "x+1"), N, P),
                mellin(atom(Lm, "x+1"), 0, P),
            ]
            v = [t.value for t in terms]
            rhs_v = v[0] + (v[1] - v[2]) + v[3] + (v[4] - v[5]) - bnd.value
        else:
            raise ValueError("variant must be 'corrected' or 'as_written'")
        err = lhs.error + sum(t.error for t in terms) + bnd.error
        return {
            "k": k, "N": N, "variant": variant, "lhs": lhs_v, "rhs": rhs_v,
            "boundary_integral": bnd.value, "residual": abs(lhs_v - rhs_v), "error": err,
        }


BOUNDARY_INTEGRALS = {
    2: "zeta(2)*ln2 - 3/4*zeta(3)",
    4: "2/5*ln2*zeta(2)^2 + 3*zeta(2)*zeta(3) - 25/4*zeta(5)",
}

