from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from boundedcf.cfcore import (
    CFExpansion,
    canonical_rotation,
    continuant,
    eval_periodic,
    expand_rational,
    expand_surd,
    field_of_word,
    is_quasi_palindromic,
    normalize,
    parse_word,
    primitive_period,
    rational_value,
    render_periodic,
    render_word,
    same_cycle,
    sqrt_period,
    sqrt_plus_floor,
)
from boundedcf.errors import DomainError
from boundedcf.exactnum import QuadraticSurd, is_square

from oracles import euclid, periodic_value_approx, surd_bracket, surd_period, word_field

words = st.lists(st.integers(1, 9), min_size=1, max_size=12).map(tuple)


class TestExpandRational:
    def test_three_eighths(self):
        assert expand_rational(3, 8) == (0, 2, 1, 2)
        assert expand_rational(3, 8, last_one=True) == (0, 2, 1, 1, 1)

    def test_zero(self):
        assert expand_rational(0, 1) == (0,)

    def test_rejects_non_reduced(self):
        with pytest.raises(DomainError):
            expand_rational(2, 8)

    @given(st.integers(0, 10**6), st.integers(1, 10**6))
    def test_matches_euclid_and_value(self, num, den):
        f = Fraction(num, den)
        word = expand_rational(f.numerator, f.denominator)
        assert list(word) == euclid(f.numerator, f.denominator)
        assert rational_value(word) == f
        alt = expand_rational(f.numerator, f.denominator, last_one=True)
        assert rational_value(alt) == f
        if word[-1] >= 2:
            assert alt[-1] == 1 and len(alt) == len(word) + 1


@given(words)
def test_continuant_is_denominator(word):
    value = rational_value((0,) + word)
    assert value.denominator == continuant(word)


class TestExpandSurd:
    @pytest.mark.parametrize(
        "surd, period",
        [
            ((3, 1, 10, 1), (6,)),
            ((2, 1, 7, 1), (4, 1, 1, 1)),
        ],
    )
    def test_purely_periodic(self, surd, period):
        cf = expand_surd(QuadraticSurd.make(*surd))
        assert cf == CFExpansion((), period)

    def test_zaremba_example_period(self):
        cf = expand_surd(QuadraticSurd.make(5, 3, 7, 8))
        assert cf.preperiod == ()
        assert same_cycle(cf.period, (1, 1, 1, 1, 1, 1, 1, 2, 1, 2))

    def test_rational_input(self):
        with pytest.raises(DomainError):
            expand_surd(QuadraticSurd.rational(3))

    @given(st.integers(-40, 40), st.integers(-6, 6), st.integers(2, 60), st.integers(1, 25))
    def test_matches_sympy(self, p, q, d, r):
        assume(q != 0 and not is_square(d))
        x = QuadraticSurd.make(p, q, d, r)
        cf = expand_surd(x)
        pre, per = surd_period(x.p, x.q, x.d, x.r) if x.q > 0 else surd_period(-x.p, -x.q, x.d, -x.r)
        full_ours = list(cf.preperiod) + list(cf.period) * 3
        full_ref = pre + per * 3
        n = min(len(full_ours), len(full_ref))
        assert full_ours[:n] == full_ref[:n]
        assert len(cf.period) == len(per)

    def test_render(self):
        assert str(expand_surd(QuadraticSurd.make(2, 1, 7))) == "[overline(4, 1, 1, 1)]"
        assert render_periodic((1, 2), (3,)) == "[1, 2 | overline(3)]"
        assert render_word((0, 2, 1, 2)) == "[0; 2, 1, 2]"


class TestEvalPeriodic:
    def test_values(self):
        assert eval_periodic((2,)) == QuadraticSurd.make(1, 1, 2)
        assert str(eval_periodic((6,))) == "3 + √10"

    def test_intro_word_field(self):
        assert eval_periodic((1, 1, 2, 1, 1, 2)).d == 10

    def test_zero_digit(self):
        with pytest.raises(DomainError):
            eval_periodic((1, 0, 2))

    @given(words)
    def test_round_trip_through_expansion(self, word):
        x = eval_periodic(word)
        cf = expand_surd(x)
        assert cf.preperiod == ()
        assert same_cycle(cf.period, word)

    @given(words)
    def test_value_against_truncation(self, word):
        x = eval_periodic(word)
        lo, hi = surd_bracket(x.p, x.q, x.d, x.r)
        approx = periodic_value_approx(word, terms=80)
        assert abs(approx - lo) < Fraction(1, 10**12)
        assert x.d == word_field(word)

    @given(words)
    def test_field_hint_agrees(self, word):
        assert eval_periodic(word, field=field_of_word(word)) == eval_periodic(word)


class TestNormalize:
    def test_merges_inner_zero(self):
        assert normalize((2, 0, 1)) == (3,)

    def test_no_zero(self):
        assert normalize((1, 2, 3)) == (1, 2, 3)

    def test_periodic_wraparound(self):
        # m(0,1,1,1) is conjugate to m(2,1); the cyclic zero merges the ends
        out = normalize((0, 1, 1, 1), periodic=True)
        assert same_cycle(out, (2, 1))
        assert eval_periodic(out).d == word_field((0, 1, 1, 1))

    def test_all_zero(self):
        with pytest.raises(DomainError):
            normalize((0, 0), periodic=True)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=12))
    def test_matrix_preserved(self, word):
        from oracles import word_matrix

        out = normalize(word)
        assert word_matrix(out) == word_matrix(word)
        inner = out[1:-1]
        assert 0 not in inner


class TestRotations:
    def test_canonical_rotation(self):
        assert canonical_rotation((2, 1, 1)) == (1, 1, 2)

    def test_primitive_period(self):
        assert primitive_period((1, 2, 1, 2)) == (1, 2)

    @given(words, st.integers(0, 20))
    def test_rotation_invariance(self, word, k):
        k %= len(word)
        rot = word[k:] + word[:k]
        assert same_cycle(word, rot)
        assert canonical_rotation(word) == canonical_rotation(rot)
        assert field_of_word(word) == field_of_word(rot)


class TestQuasiPalindrome:
    def test_sqrt10(self):
        res = is_quasi_palindromic(QuadraticSurd.make(3, 1, 10))
        assert res.holds and res.witness == (6,)

    def test_sqrt7(self):
        res = is_quasi_palindromic(QuadraticSurd.make(2, 1, 7))
        assert res.holds and res.witness == (4, 1, 1, 1)

    def test_one_plus_sqrt2(self):
        # trace 2 equals the floor of 2.414..., and the period is (2)
        res = is_quasi_palindromic(QuadraticSurd.make(1, 1, 2))
        assert res.holds and res.witness == (2,)

    def test_not_quasi(self):
        assert not is_quasi_palindromic(QuadraticSurd.make(5, 3, 7, 8)).holds
        assert not is_quasi_palindromic(QuadraticSurd.make(2, 1, 2)).holds
        assert is_quasi_palindromic(QuadraticSurd.make(1, 1, 5, 2)).witness == (1,)

    @pytest.mark.parametrize("delta, period", [(10, (6,)), (7, (4, 1, 1, 1)), (2, (2,))])
    def test_sqrt_plus_floor(self, delta, period):
        assert sqrt_period(delta) == period
        assert expand_surd(sqrt_plus_floor(delta)).preperiod == ()

    @given(st.lists(st.integers(1, 4), max_size=4).map(tuple), st.integers(1, 9), st.booleans())
    def test_shape_iff_trace_test(self, half, head, odd):
        pal = half + ((head,) if odd else ()) + half[::-1]
        word = (head,) + pal
        x = eval_periodic(word)
        tr = x.trace()
        expected = tr.denominator == 1 and tr.numerator == x.floor()
        res = is_quasi_palindromic(x)
        assert res.holds == expected
        if res.holds:
            assert same_cycle(res.witness, word)


def test_parse_word():
    assert parse_word("1,1,1,4") == (1, 1, 1, 4)
    assert parse_word("[6]") == (6,)
    assert parse_word("") == ()
