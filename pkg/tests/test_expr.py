from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from harmsum import expr as E


def test_sum_node():
    node = E.parse("S[2,1](10)")
    assert isinstance(node, E.SumRef) and node.indices == (2, 1)
    assert E.evaluate(node) == Fraction(
        sum(Fraction(sum(Fraction(1, j) for j in range(1, k + 1)), k * k) for k in range(1, 11)))


@pytest.mark.parametrize("text,msg,pos", [
    ("S[-3,0,1](5)", "zero index", 6),
    ("foo(3)", "unknown function", 1),
    ("1/0", "malformed rational", 3),
])
def test_syntax_errors(text, msg, pos):
    with pytest.raises(E.ExprSyntaxError) as err:
        E.parse(text)
    assert msg in str(err.value) and err.value.position == pos


def test_arithmetic_tree():
    node = E.parse("1/2*zeta(3) - S[3](4)")
    assert isinstance(node, E.Bin) and node.op == "-"
    with mpmath.workdps(40):
        val = E.evaluate(node, E.Context(digits=30))
        ref = mpmath.zeta(3) / 2 - sum(mpmath.mpf(1) / k**3 for k in range(1, 5))
        assert abs(val - ref) < mpmath.mpf(10) ** -28


CANONICAL = [
    "S[2,1](N)",
    "-S[-2,1](N+1) + 3/4*zeta(3)*ln2",
    "M[Li2(x)/(x-1)]+(N) - 2*S[1](N)^2",
    "(-1)^N*M[S12(-x)/(x+1)](N)",
    "H[0,-1,1](1/2) + Li4(1/2)",
]


@pytest.mark.parametrize("text", CANONICAL)
def test_round_trip(text):
    node = E.parse(text)
    assert E.parse(E.to_text(node)) == node


atoms = st.sampled_from(["S[1](N)", "S[-2,1](N)", "zeta(3)", "ln2", "3/7", "M[ln(x)/(1+x)](N)"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(atoms)
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({draw(expressions(depth - 1))}) {op} ({draw(expressions(depth - 1))})"


@given(expressions())
def test_round_trip_property(text):
    node = E.parse(text)
    assert E.parse(E.to_text(node)) == node


def test_weights():
    assert E.weight_of(E.parse("zeta(3)*S[2](N)")) == 5
    assert E.weight_of(E.parse("M[Li2(x)/(x-1)]+(N)")) == 3
    assert E.term_weights(E.parse("ln2*zeta(2) + S[-3](N)")) == [("ln2*zeta(2)", 3), ("S[-3](N)", 3)]


def test_exact_at_integer_argument():
    assert E.evaluate(E.parse("S[1](N+1) - S[1](N)"), E.Context(N=4)) == Fraction(1, 5)


def test_hook_for_non_integer_argument():
    with pytest.raises(E.EvaluationError):
        E.evaluate(E.parse("S[1](N)"), E.Context(N=Fraction(5, 2)))
    val = E.evaluate(E.parse("2*S[1](N)"), E.Context(N=Fraction(5, 2), sum_value=lambda v, n: 7))
    assert val == 14
