import pytest
from hypothesis import given, strategies as st

from harmsum.algebra import (
    SumPolynomial, algebraic_reduce, basis_census, euler_pair, irreducible_count_by_rank, is_lyndon,
    lyndon_words, product, quasi_shuffle,
)
from harmsum.sums import eval_exact, weight

indices = st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=3).map(tuple)


@given(indices, indices, st.integers(1, 12))
def test_product_pointwise(u, v, N):
    assert product(u, v).evaluate(N) == eval_exact(u, N) * eval_exact(v, N)


@given(indices, indices)
def test_quasi_shuffle_commutes(u, v):
    assert quasi_shuffle(u, v) == quasi_shuffle(v, u)
    assert all(weight(w) == weight(u) + weight(v) for w in quasi_shuffle(u, v))


@given(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=4).map(tuple), st.integers(1, 10))
def test_reduction_preserves_value(v, N):
    p = algebraic_reduce(v)
    assert p.evaluate(N) == eval_exact(v, N)
    assert all(is_lyndon(w) for w in p.words())


@pytest.mark.parametrize("a,b", [(1, 1), (2, -3), (-5, -5), (4, 1)])
def test_euler_relation(a, b):
    assert all(euler_pair(a, b, n).holds for n in range(1, 15))


def test_euler_rejects_zero():
    with pytest.raises(ValueError):
        euler_pair(0, 2, 3)


@pytest.mark.parametrize("w", range(1, 6))
@pytest.mark.parametrize("no_minus_one", [False, True])
def test_basis_count_two_routes(w, no_minus_one):
    # Lyndon-word count against the rank of the product span
    assert basis_census(w, no_minus_one)["algebraic_basis_count"] == irreducible_count_by_rank(w, no_minus_one)


def test_weight_six_census():
    assert basis_census(6, True) == {"total": 99, "algebraic_basis_count": 30}
    assert len(lyndon_words(6, True)) == 30


def test_polynomial_json_round_trip():
    p = algebraic_reduce((2, 1, -1))
    assert SumPolynomial.from_json(p.to_json()) == p
    assert str(SumPolynomial.sum((1,)) * SumPolynomial.sum((1,))) == "S[1](N)^2"
