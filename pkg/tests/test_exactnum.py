import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import factorint

from boundedcf.errors import DomainError, UnfactoredError
from boundedcf.exactnum import (
    QuadraticSurd,
    factorize,
    in_field,
    is_probable_prime,
    is_square,
    is_squarefree,
    isqrt,
    parse_surd,
    squarefree_split,
    surd_normalize,
)

from oracles import squarefree_part as oracle_squarefree, surd_bracket


@pytest.mark.parametrize("n, root", [(0, 0), (49, 7), (1536796800, 39201)])
def test_isqrt_values(n, root):
    assert isqrt(n) == root
    assert root * root <= n < (root + 1) ** 2


def test_isqrt_rejects_negative():
    with pytest.raises(DomainError):
        isqrt(-1)


@pytest.mark.parametrize("n, split", [(1, (1, 1)), (1536796800, (2, 27720)), (252, (7, 6))])
def test_squarefree_split_values(n, split):
    assert squarefree_split(n) == split


@given(st.integers(min_value=1, max_value=10**15))
def test_factorize_matches_sympy(n):
    assert factorize(n) == factorint(n)


@given(st.integers(min_value=1, max_value=10**12))
def test_squarefree_split_reassembles(n):
    delta, k = squarefree_split(n)
    assert delta * k * k == n
    assert delta == oracle_squarefree(n)
    assert is_squarefree(delta)


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    assert factorize(p * q * 4) == {2: 2, p: 1, q: 1}


def test_factorize_reports_unfinished_work():
    p, q = 1000000007, 998244353
    with pytest.raises(UnfactoredError) as info:
        factorize(p * q, trial_bound=100, rho_iterations=1)
    assert info.value.cofactor == p * q


@given(st.integers(min_value=0, max_value=10**6))
def test_primality_agrees_with_sympy(n):
    assert is_probable_prime(n) == (factorint(n) == {n: 1} and n > 1)


@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=10**4))
def test_in_field_without_factoring(delta, k):
    delta = oracle_squarefree(delta)
    assert in_field(delta * k * k, delta)
    assert not in_field(delta * (k * k + 1), delta)


def test_in_field_rejects_other_fields():
    assert in_field(252, 7)
    assert not in_field(252, 2)
    assert not in_field(0, 7)


class TestSurdNormalize:
    def test_reduces_root_and_gcd(self):
        assert surd_normalize(2, 1, 8, 2) == QuadraticSurd.make(1, 1, 2, 1)
        assert str(surd_normalize(2, 1, 8, 2)) == "1 + √2"

    def test_canonical_input_unchanged(self):
        x = surd_normalize(5, 3, 7, 8)
        assert (x.p, x.q, x.d, x.r) == (5, 3, 7, 8)

    def test_collapses_to_rational(self):
        x = surd_normalize(4, 0, 7, 2)
        assert x.is_rational and (x.p, x.q, x.d, x.r) == (2, 0, 0, 1)

    def test_perfect_square_radicand(self):
        assert surd_normalize(1, 1, 9, 2) == QuadraticSurd.rational(2)

    def test_sign_moves_to_numerator(self):
        x = surd_normalize(1, 1, 2, -3)
        assert x.r == 3 and x.p == -1 and x.q == -1

    def test_zero_denominator(self):
        with pytest.raises(DomainError):
            surd_normalize(1, 1, 2, 0)


class TestSurdArithmetic:
    def test_conjugate_sum(self):
        assert QuadraticSurd.make(1, 1, 2) + QuadraticSurd.make(1, -1, 2) == QuadraticSurd.rational(2)

    def test_golden_products(self):
        phi = QuadraticSurd.make(1, 1, 5, 2)
        assert phi * phi.conjugate() == QuadraticSurd.rational(-1)
        assert phi * QuadraticSurd.make(-1, 1, 5, 2) == QuadraticSurd.rational(1)

    def test_subtraction(self):
        assert QuadraticSurd.make(5, 3, 7, 8) - 1 == QuadraticSurd.make(-3, 3, 7, 8)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            QuadraticSurd.make(1, 1, 2) / QuadraticSurd.rational(0)

    def test_mixed_fields(self):
        with pytest.raises(DomainError):
            QuadraticSurd.make(0, 1, 2) + QuadraticSurd.make(0, 1, 3)

    @pytest.mark.parametrize(
        "surd, floor",
        [((2, 1, 7, 1), 4), ((1, 1, 5, 2), 1), ((0, -1, 2, 1), -2), ((7, 0, 0, 2), 3), ((-7, 0, 0, 2), -4)],
    )
    def test_floor(self, surd, floor):
        assert QuadraticSurd.make(*surd).floor() == floor

    @pytest.mark.parametrize(
        "surd, trace, norm",
        [
            ((3, 1, 10, 1), Fraction(6), Fraction(-1)),
            ((5, 0, 0, 1), Fraction(10), Fraction(25)),
            ((5, 3, 7, 8), Fraction(5, 4), Fraction(-19, 32)),
        ],
    )
    def test_trace_norm(self, surd, trace, norm):
        x = QuadraticSurd.make(*surd)
        assert (x.trace(), x.norm()) == (trace, norm)


surds = st.builds(
    QuadraticSurd.make,
    st.integers(-50, 50),
    st.integers(-20, 20),
    st.sampled_from([2, 3, 5, 6, 7, 10, 8, 12]),
    st.integers(1, 30),
)


@given(surds, surds)
def test_field_axioms(x, y):
    x = QuadraticSurd.make(x.p, x.q, 7 if x.q else 0, x.r)
    y = QuadraticSurd.make(y.p, y.q, 7 if y.q else 0, y.r)
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if y != QuadraticSurd.rational(0):
        assert (x / y) * y == x
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@given(surds)
def test_floor_brackets_value(x):
    f = x.floor()
    assert QuadraticSurd.rational(f) <= x < QuadraticSurd.rational(f + 1)
    lo, hi = surd_bracket(x.p, x.q, x.d, x.r)
    if math.floor(lo) == math.floor(hi):
        assert f == math.floor(lo)


@given(surds)
def test_sign_against_bracket(x):
    lo, hi = surd_bracket(x.p, x.q, x.d, x.r)
    if lo > 0:
        assert x.sign() == 1
    elif hi < 0:
        assert x.sign() == -1
    assert lo <= Fraction(x.approx(30)) + Fraction(1, 10**29) and Fraction(x.approx(30)) - Fraction(1, 10**29) <= hi


@given(surds)
def test_json_round_trip(x):
    data = x.to_json()
    y = QuadraticSurd.make(data["p"], data["q"], data["d"], data["r"])
    assert y == x
    if x.q:
        assert parse_surd(f"{x.p},{x.q},{x.d},{x.r}") == x
