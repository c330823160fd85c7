"""Basic functions: kernels f(x)/(x +- 1) whose Mellin transforms span the sums of each weight.

Weights 1 and 2 contribute one kernel each, 1/(x-1) and ln(1+x)/(x+1),
whose transforms are the single sums and Euler's beta-type function.  They
are marked ``elementary``; the counts of basic functions quoted for the
weights up to 5 refer to the non-elementary kernels of weights 3 to 5.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BasicFunction:
    weight: int
    numerator: str
    denominator: str
    elementary: bool = False

    @property
    def kernel(self) -> str:
        return f"{self.numerator}/({self.denominator})"

    def atom_text(self) -> str:
        plus = "+" if self.denominator == "x-1" and self.numerator != "1" else ""
        return f"M[{self.kernel}]{plus}(N)"


def _pm(w: int, num: str) -> list[BasicFunction]:
    return [BasicFunction(w, num, "x-1"), BasicFunction(w, num, "x+1")]


_TABLE: dict[int, list[BasicFunction]] = {
    1: [BasicFunction(1, "1", "x-1", True)],
    2: [BasicFunction(2, "ln(1+x)", "x+1", True)],
    3: _pm(3, "Li2(x)"),
    4: [BasicFunction(4, "Li3(x)", "x+1")] + _pm(4, "S12(x)"),
    5: _pm(5, "Li4(x)") + _pm(5, "S13(x)") + _pm(5, "S22(x)") + _pm(5, "Li2(x)^2")
    + _pm(5, "ln(x)*S12(-x) - Li2(-x)^2/2"),
    6: [BasicFunction(6, "Li5(x)", "x+1")]
    + _pm(6, "S14(x)") + _pm(6, "S23(x)") + _pm(6, "S32(x)") + _pm(6, "Li2(x)*Li3(x)")
    + [BasicFunction(6, "A1(x)", "x+1")] + _pm(6, "A2(x)") + [BasicFunction(6, "A3(x)", "x+1")]
    + _pm(6, "H[0,-1,0,1,1](x)") + _pm(6, "H[0,0,-1,0,1](x)")
    + _pm(6, "A1(-x) + 2*S32(-x) - 2*S22(-x)*ln(x)")
    + [BasicFunction(6, "A1(-x) + 2*S32(-x) - S22(-x)*ln(x) + Li2(-x)^2*ln(x)/4 - Li3(-x)*Li2(-x)", "x-1")],
}


def basis_list(w: int) -> list[BasicFunction]:
    """The basic functions first needed at weight ``w`` (1..6)."""
    if w not in _TABLE:
        raise ValueError("weight must be between 1 and 6")
    return list(_TABLE[w])


def basis_through(w: int, include_elementary: bool = False) -> list[BasicFunction]:
    out = []
    for k in range(1, w + 1):
        out += [f for f in basis_list(k) if include_elementary or not f.elementary]
    return out
