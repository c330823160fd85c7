from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from harmsum.mellin import (
    BOUNDARY_INTEGRALS, MellinValue, NonIntegrableError, atom, differentiate, duplicate, mellin, moment,
    recursion_step,
)
from harmsum.sums import eval_exact

TOL = mpf(10) ** -28


@pytest.fixture(autouse=True)
def _precision():
    with mp.workdps(45):
        yield


def q(x: Fraction):
    return mpf(x.numerator) / x.denominator


@given(st.integers(0, 20))
def test_plus_one_over_x_minus_one_is_s1(n):
    assert abs(mellin(atom("1", "x-1", plus=True), n, 30).value - q(eval_exact((1,), n) if n else Fraction(0))) < TOL


@pytest.mark.parametrize("N", [0, 3, mpf("2.5"), mpmath.mpc(1, 2)])
def test_elementary_kernels(N):
    assert abs(mellin(atom("ln(x)^2"), N, 30).value - 2 / (N + 1) ** 3) < TOL
    assert abs(mellin(atom("ln(x)"), N, 30).value + 1 / (N + 1) ** 2) < TOL
    assert abs(mellin(atom("ln(x)", "x-1"), N, 30).value - mpmath.zeta(2, N + 1)) < TOL


def test_alternating_atom():
    # int (-x)^N/(1+x) for even N equals (-1)^N (ln 2 - sum_{k<N} (-1)^k/(k+1))
    val = mellin(atom("1", "x+1", alt=True), 4, 30).value
    ref = mpmath.log(2) - sum(mpf(-1) ** k / (k + 1) for k in range(4))
    assert abs(val - ref) < TOL
    with pytest.raises(ValueError):
        mellin(atom("1", "x+1", alt=True), mpf("2.5"), 30)


def test_derivative_against_closed_form():
    d = differentiate(atom("1"), mpf("2.5"), 2, 30).value
    assert abs(d - 2 / mpf("3.5") ** 3) < TOL


def test_derivative_against_finite_difference():
    a = atom("Li2(x)", "x-1", plus=True)
    d = differentiate(a, mpf("1.5"), 1, 30).value
    h = mpf(10) ** -8
    fd = (mellin(a, mpf("1.5") + h, 40).value - mellin(a, mpf("1.5") - h, 40).value) / (2 * h)
    assert abs(d - fd) < mpf(10) ** -14
    # the second derivative needs no subtraction either
    d2 = differentiate(a, mpf("1.5"), 2, 30).value
    fd2 = (differentiate(a, mpf("1.5") + h, 1, 40).value - differentiate(a, mpf("1.5") - h, 1, 40).value) / (2 * h)
    assert abs(d2 - fd2) < mpf(10) ** -14


def test_invalid_atoms():
    with pytest.raises(ValueError):
        atom("Li2(x)", "x+1", plus=True)
    with pytest.raises(NonIntegrableError):
        mellin(atom("Li2(x)", "x-1"), 2, 30)
    with pytest.raises(NonIntegrableError):
        mellin(atom("1"), mpf(-1.5), 30)


def test_recursion_minus_branch_gives_s1():
    a = atom("1", "x-1", plus=True)
    F = mellin(a, 1, 30)
    for n in range(1, 6):
        F = recursion_step(a, F, 30)
        assert abs(F.value - q(eval_exact((1,), n + 1))) < TOL


def test_recursion_plus_branch():
    a = atom("Li2(x)", "x+1", plus=False, alt=True)
    with pytest.raises(ValueError):
        recursion_step(a, MellinValue(0, 1, 0, 30), 30)


def test_recursion_with_nielsen_moment():
    # F(N+1) - F(N) = M[S_{1,4}](N) = (zeta5 - S_{1,1,1,1}(N+1)/(N+1))/(N+1)
    a = atom("S14(x)", "x-1", plus=True)
    for n in (1, 2, 5):
        F = mellin(a, n, 30)
        G = recursion_step(a, F, 30)
        closed = (mpmath.zeta(5) - q(eval_exact((1, 1, 1, 1), n + 1)) / (n + 1)) / (n + 1)
        assert abs((G.value - F.value) - closed) < TOL
        assert abs(moment(a, n, 30).value - closed) < TOL


@pytest.mark.parametrize("k", [3, 5])
def test_duplication_other_weights(k):
    assert duplicate(k, 3, 30)["residual"] < TOL


def test_duplication_as_written_fails():
    assert duplicate(2, 3, 30, variant="as_written")["residual"] > mpf("1e-3")


def test_boundary_integral_texts():
    assert set(BOUNDARY_INTEGRALS) == {2, 4}
