import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from harmsum.specfun import constants as C
from harmsum.specfun.functions import aux_A, nielsen, nielsen_by_quadrature, polylog, s1k_of_1mx
from harmsum.specfun.hpl import DomainError, hpl, sum_at_infinity
from harmsum.specfun.quadrature import integrate

TOL = mpf(10) ** -28


@pytest.fixture(autouse=True)
def _precision():
    with mp.workdps(40):
        yield


@given(st.integers(1, 6), st.fractions(-1, 1).filter(lambda q: abs(q) < 1))
def test_polylog_against_mpmath(k, q):
    x = mpf(q.numerator) / q.denominator
    assert abs(polylog(k, x, 30) - mpmath.polylog(k, x)) < TOL


def test_polylog_endpoints():
    assert abs(polylog(3, 1, 30) - mpmath.zeta(3)) < TOL
    assert abs(polylog(2, -1, 30) + mpmath.pi**2 / 12) < TOL


@pytest.mark.parametrize("x", ["0.3", "0.9", "0.5"])
def test_low_weight_hpls(x):
    x = mpf(x)
    assert abs(hpl((1,), x, 30) + mpmath.log(1 - x)) < TOL
    assert abs(hpl((-1,), x, 30) - mpmath.log(1 + x)) < TOL
    assert abs(hpl((0, 1), x, 30) - mpmath.polylog(2, x)) < TOL
    assert abs(hpl((0, 0, -1), x, 30) + mpmath.polylog(3, -x)) < TOL


def test_hpl_divergent_endpoint():
    with pytest.raises(DomainError):
        hpl((1,), 1, 30)


@pytest.mark.parametrize("p,n,x", [(1, 2, "0.4"), (2, 2, "-0.7"), (1, 4, "0.95"), (3, 2, "0.99")])
def test_nielsen_two_routes(p, n, x):
    assert abs(nielsen(p, n, x, 30) - nielsen_by_quadrature(p, n, x, 30)) < TOL


def test_nielsen_reduces_to_polylog():
    assert abs(nielsen(3, 1, mpf("0.6"), 30) - mpmath.polylog(4, mpf("0.6"))) < TOL


@pytest.mark.parametrize("k", [2, 3, 4])
def test_s1k_of_one_minus_x(k):
    x = mpf("0.35")
    assert abs(s1k_of_1mx(k, x, 30) - nielsen(1, k, 1 - x, 30)) < TOL


def test_aux_a3():
    # A3(1) = int_0^1 (Li4(1-x) - zeta4)/x dx, checked by direct quadrature
    ref, _ = integrate(lambda x, t, lx, lt: (mpmath.polylog(4, t) - mpmath.zeta(4)) / x, 40)
    assert abs(aux_A(3, 1, 30) - ref) < TOL
    assert abs(ref - (-3 * mpmath.zeta(5) + mpmath.zeta(2) * mpmath.zeta(3))) < TOL


def test_constants_registry():
    assert abs(C.value("zeta(3)", 30) - mpmath.zeta(3)) < TOL
    assert abs(C.value("Li4(1/2)", 30) - mpmath.polylog(4, mpf(1) / 2)) < TOL
    assert C.canonical_name("log2") == "ln2"
    assert C.constant_weight("zeta(5)") == 5
    assert C.constant("s6", 30).provenance == "quadrature"
    with pytest.raises(C.UnknownConstantError):
        C.value("zeta(1)", 30)


def test_s6_two_routes():
    assert abs(C.value("s6", 40) - C.s6_by_hpl(40)) < mpf(10) ** -38


def test_quadrature_endpoint_logs():
    val, err = integrate(lambda x, t, lx, lt: lx * lt, 40)
    assert abs(val - (2 - mpmath.zeta(2))) < mpf(10) ** -35


@pytest.mark.parametrize("v,ref", [
    ((2, 1), lambda: 2 * mpmath.zeta(3)),
    ((-1,), lambda: -mpmath.log(2)),
    ((3, 1), lambda: mpmath.zeta(4) * 5 / 4),
    ((-2,), lambda: -mpmath.zeta(2) / 2),
])
def test_sums_at_infinity(v, ref):
    assert abs(sum_at_infinity(v, 30) - ref()) < TOL
