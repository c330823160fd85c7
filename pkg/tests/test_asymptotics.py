from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from harmsum.asymptotics import (
    PRINTED_LI5_COEFFICIENTS, AsymptoticRangeError, ContinuationConfig, KernelSeriesError, PoleError,
    SingularKernelError, UnsupportedSumError, asym_eval, continue_by_mellin, continue_sum,
    factorial_to_asymptotic, kernel_tseries, li5_series, li_ladder, routes_for, series_from_kernel,
)
from harmsum.sums import eval_exact


def q(x: Fraction):
    return mpf(x.numerator) / x.denominator


@pytest.fixture(autouse=True)
def _precision():
    with mp.workdps(45):
        yield


def test_printed_coefficients():
    s = li5_series()
    assert s.coefficient(2) == Fraction(1, 32)
    assert s.coefficient(3) == Fraction(-179, 7776)
    assert s.coefficients[:19] == PRINTED_LI5_COEFFICIENTS
    assert len(str(PRINTED_LI5_COEFFICIENTS[-1].denominator)) == 33


def test_trivial_kernels():
    one = series_from_kernel("1", 6, shift=0)
    assert one.coefficients == tuple(Fraction((-1) ** k) for k in range(6))
    lin = series_from_kernel("1-x", 5, shift=0)
    assert lin.coefficients == (0, 1, -3, 7, -15)
    assert series_from_kernel("1", 4).coefficients == (1, 0, 0, 0)


def test_exact_expansions():
    assert kernel_tseries("Li2(1-x)", 4) == [0, 1, Fraction(1, 4), Fraction(1, 9)]
    assert kernel_tseries("ln(x)", 4) == [0, -1, Fraction(-1, 2), Fraction(-1, 3)]
    assert kernel_tseries("S12(1-x)/(1-x)", 3) == [0, Fraction(1, 4), Fraction(1, 6)]
    assert kernel_tseries("H[0,1](1-x)/(x-1)", 3) == [-1, Fraction(-1, 4), Fraction(-1, 9)]
    assert kernel_tseries("1/(1+x)", 3) == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


@pytest.mark.parametrize("kernel", ["ln(1-x)", "Li2(x)", "1/(1-x)", "Li3(1-x)/(1-x)^2", "H[1,0](1-x)"])
def test_singular_kernels_rejected(kernel):
    with pytest.raises(SingularKernelError):
        kernel_tseries(kernel, 5)


def test_irrational_kernel_rejected():
    with pytest.raises(KernelSeriesError):
        kernel_tseries("zeta(3)*Li2(1-x)", 5)
    with pytest.raises(KernelSeriesError):
        kernel_tseries("ln(1+x)", 5)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_series_against_quadrature(k):
    from harmsum.mellin import atom, mellin

    s = series_from_kernel(f"Li{k}(1-x)/(1-x)", 24)
    z = 50
    v = asym_eval(s, z, 19, 40)
    ref = mellin(atom(f"Li{k}(1-x)", "1-x"), z - 1, 40).value
    assert abs(v.value - ref) <= 2 * v.bound


@settings(max_examples=25)
@given(st.integers(1, 18), st.floats(25, 500), st.floats(-0.5, 0.5))
def test_truncation_consistency(k, r, phi):
    s = li5_series()
    z = mpmath.mpc(r * mpmath.cos(phi), r * mpmath.sin(phi))
    a, b = asym_eval(s, z, k, 30), asym_eval(s, z, k + 1, 30)
    assert abs(b.value - a.value) <= a.bound * (1 + mpf(10) ** -10) + mpf(10) ** -40


def test_asym_range_and_export():
    s = li5_series()
    with pytest.raises(AsymptoticRangeError):
        asym_eval(s, 10, 19)
    data = s.to_json()
    assert data["coefficients"][2] == {"k": 3, "coeff": "-179/7776"}


def test_generic_shift():
    b = [Fraction(1, n + 2) for n in range(8)]
    c0 = factorial_to_asymptotic(b, 8, 0)
    c2 = factorial_to_asymptotic(b, 8, 2)
    N = mpf(40)
    v0 = sum(q(c) / N ** (k + 1) for k, c in enumerate(c0))
    v2 = sum(q(c) / (N + 2) ** (k + 1) for k, c in enumerate(c2))
    assert abs(v0 - v2) < mpf(10) ** -11


def test_ladder_base():
    G, _ = li_ladder(2, mpf("2.5"), ContinuationConfig(digits=30))
    assert abs(G[0] - 1 / mpf("2.5")) < mpf(10) ** -40
    assert abs(G[1] - mpmath.zeta(2, mpf("3.5"))) < mpf(10) ** -28


def test_routes():
    assert routes_for((3,)) == "single"
    assert routes_for((1, 1, 1)) == "ones"
    assert routes_for((1, 1, 2)) == "factorial"
    assert routes_for((2, 1, 1, 1, 1)) == "decomposition"
    assert routes_for((2, 1)) == "tail-only"
    assert routes_for((-2, 1)) == "unsupported"


CFG = ContinuationConfig(digits=30)


@pytest.mark.parametrize("v", [(1,), (3,), (1, 1, 1), (1, 2), (1, 1, 1, 2)])
def test_simple_routes_match_exact(v):
    for n in (1, 4, 9):
        assert abs(continue_sum(v, n, CFG).value - q(eval_exact(v, n))) < mpf(10) ** -25


@pytest.mark.parametrize("v", [(2, 1), (3, 1, 2), (2, 1, 1, 1, 1)])
def test_tail_route_matches_exact(v):
    for n in (3, 11):
        assert abs(continue_sum(v, n, CFG, method="tail").value - q(eval_exact(v, n))) < mpf(10) ** -25


def test_eq11112_against_quadrature():
    for N in (6, mpf("6.5")):
        a = continue_sum((1, 1, 1, 1, 2), N, CFG).value
        assert abs(a - continue_by_mellin((1, 1, 1, 1, 2), N, 30)) < mpf(10) ** -25


def test_three_routes_for_21111():
    N = mpmath.mpc("1.25", "-0.5")
    a = continue_sum((2, 1, 1, 1, 1), N, CFG).value
    b = continue_sum((2, 1, 1, 1, 1), N, CFG, method="tail").value
    c = continue_by_mellin((2, 1, 1, 1, 1), N, 30)
    assert abs(a - b) < mpf(10) ** -25 and abs(a - c) < mpf(10) ** -25


@settings(max_examples=6)
@given(st.floats(0.1, 12), st.floats(-6, 6))
def test_shift_independence(re, im):
    N = mpmath.mpc(re, im)
    for v in ((2, 1, 1, 1, 1), (1, 1, 1, 1, 2)):
        a = continue_sum(v, N, CFG).value
        b = continue_sum(v, N, CFG, extra_shift=1).value
        assert abs(a - b) < mpf(10) ** -25


def test_pole_structure():
    vals = [abs(continue_sum((2, 1, 1, 1, 1), -1 + mpf(10) ** -e, CFG).value) for e in (2, 4, 6)]
    # a simple pole: |S(-1 + e)| ~ 1/e
    assert vals[0] < vals[1] < vals[2] and vals[2] > 1e5
    with pytest.raises(PoleError):
        continue_sum((1, 1, 1, 1, 2), -2 + mpf(10) ** -20, CFG)
    r = continue_sum((1, 1, 1, 1, 2), mpf("-1.5"), CFG)
    assert r.nearest_pole in (-1, -2) and r.pole_distance == mpf("0.5")


def test_unsupported_sums():
    with pytest.raises(UnsupportedSumError):
        continue_sum((-2, 1), 3, CFG)
    with pytest.raises(UnsupportedSumError):
        continue_sum((2, 1), 3, CFG)
    with pytest.raises(UnsupportedSumError):
        continue_by_mellin((2, 1), 3)


def test_default_threshold_scales():
    assert ContinuationConfig(digits=20).threshold() == 25.0
    assert ContinuationConfig(digits=50).threshold() > ContinuationConfig(digits=30).threshold() > 25
    assert ContinuationConfig(z_min=60).threshold() == 60.0
