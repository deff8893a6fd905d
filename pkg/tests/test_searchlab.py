import json
import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from boundedcf import _kernels_py as pure
from boundedcf import kernels
from boundedcf.cfcore import continuant, eval_periodic, expand_rational
from boundedcf.errors import DomainError
from boundedcf.exactnum import QuadraticSurd
from boundedcf.searchlab import (
    CHECKPOINT_FORMAT,
    conj12_deltas,
    density_scan,
    fib_fields,
    fibonacci,
    load_checkpoint,
    squarefree_n2_minus_1,
    verify_conj12,
    zaremba_brute,
    zaremba_constrained,
    zaremba_numerators,
    zaremba_search,
)

from oracles import euclid, squarefree_part, word_field

compiled = kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def word_value(word):
    """p/q of [0; word] by Euclid's recurrence run backwards."""
    p, q = 0, 1
    for x in reversed(word):
        p, q = q, x * q + p
    return p, q


class TestZarembaSearch:
    def test_two_with_ones(self):
        hit = zaremba_search(2, 1)
        assert (hit.p, hit.word) == (1, (1, 1))

    @pytest.mark.parametrize("q, m", [(6, 2), (54, 1), (6, 1)])
    def test_absent(self, q, m):
        assert zaremba_search(q, m) is None
        assert zaremba_brute(q, m) == []

    def test_rejects_small_q(self):
        with pytest.raises(DomainError):
            zaremba_search(1, 3)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_numerators_match_brute_force(self, m):
        for q in range(2, 201):
            assert zaremba_numerators(q, m) == zaremba_brute(q, m), q

    @given(st.integers(2, 3000), st.integers(1, 6))
    def test_hit_reexpands(self, q, m):
        hit = zaremba_search(q, m)
        if hit is None:
            assert zaremba_brute(q, m) == []
            return
        assert word_value(hit.word) == (hit.p, q)
        assert math.gcd(hit.p, q) == 1
        assert max(hit.word) <= m
        # the word is one of the two expansions of p/q
        digits = euclid(hit.p, q)[1:]
        assert hit.word in (tuple(digits), tuple(digits[:-1]) + (digits[-1] - 1, 1))

    @given(st.integers(2, 3000), st.integers(1, 5))
    def test_monotone_in_m(self, q, m):
        if zaremba_search(q, m) is not None:
            assert zaremba_search(q, m + 1) is not None

    def test_fibonacci_only_for_ones(self):
        fibs = {fibonacci(n) for n in range(2, 15)}
        for q in range(2, 400):
            assert (zaremba_search(q, 1) is not None) == (q in fibs)


class TestConstrained:
    @pytest.mark.parametrize("q, word", [(2, (2,)), (12, (2, 2, 2)), (13, (2, 1, 1, 2))])
    def test_present(self, q, word):
        hit = zaremba_constrained(q)
        assert hit.word == word and continuant(word) == q

    def test_three_absent(self):
        assert zaremba_constrained(3) is None

    def test_against_enumeration(self):
        reach = set()
        stack = [(2,)]
        while stack:
            w = stack.pop()
            if continuant(w) > 300:
                continue
            if w[-1] == 2:
                reach.add(continuant(w))
            stack.extend([w + (1,), w + (2,)])
        for q in range(2, 301):
            assert (zaremba_constrained(q) is not None) == (q in reach), q


class TestKernelParity:
    @needs_compiled
    @given(st.integers(2, 5000), st.integers(1, 6))
    def test_dfs_first(self, q, m):
        assert compiled.dfs_first(q, m) == pure.dfs_first(q, m)

    @needs_compiled
    @given(st.integers(2, 3000), st.integers(1, 5))
    def test_dfs_numerators(self, q, m):
        assert compiled.dfs_numerators(q, m) == pure.dfs_numerators(q, m)

    @needs_compiled
    @given(st.integers(2, 20000))
    def test_constrained(self, q):
        assert compiled.dfs_constrained_first(q) == pure.dfs_constrained_first(q)

    @needs_compiled
    @settings(max_examples=40)
    @given(st.integers(2, 10**7), st.integers(0, 2))
    def test_search12(self, c, skip):
        assert compiled.search12(c, 200_000, skip) == pure.search12(c, 200_000, skip)

    @given(st.integers(2, 4000))
    def test_search12_words(self, c):
        word, nodes = pure.search12(c, 10**6)
        assert nodes >= 0
        if word is not None:
            assert continuant(word) == c and set(word) <= {1, 2}
            assert word[:1] == (2,) or word[:2] == (1, 1)
            assert word[-1:] == (2,) or word[-2:] == (1, 1)

    def test_backend_names(self):
        assert kernels.BACKEND in ("cython", "python")
        assert pure.BACKEND == "python"


class TestConj12:
    def test_deltas_are_squarefree(self):
        ds = conj12_deltas(30)
        assert ds[:5] == [2, 3, 5, 6, 7] and 4 not in ds and 8 not in ds and 12 not in ds

    def test_small_run_certifies(self):
        records = verify_conj12(24)
        assert [r.delta for r in records] == conj12_deltas(24)
        for r in records:
            assert r.status == "witness"
            assert set(r.word) <= {1, 2}
            assert word_field(r.word) == r.delta
            assert r.c**2 - r.delta * r.b**2 in (1, -1)
            assert eval_periodic(r.word, field=r.delta) == QuadraticSurd.make(r.c - r.a, r.b, r.delta, r.c)

    def test_delta19_length(self):
        (rec,) = [r for r in verify_conj12(20) if r.delta == 19]
        assert len(rec.word) == 78 and word_field(rec.word) == 19

    def test_budget_exhaustion_recorded(self):
        records = verify_conj12(14, budget=10)
        stuck = [r for r in records if r.status == "budget"]
        assert stuck and all(r.word is None for r in stuck)

    def test_checkpoint_and_resume(self, tmp_path):
        path = tmp_path / "conj12.json"
        first = verify_conj12(14, budget=10, checkpoint=path)
        data = json.loads(path.read_text())
        assert data["format"] == CHECKPOINT_FORMAT
        assert {r["delta"] for r in data["records"]} == {r.delta for r in first}
        resumed = verify_conj12(14, checkpoint=path, resume=True)
        assert all(r.status == "witness" for r in resumed)
        again = load_checkpoint(path)
        assert {d: r.word for d, r in again.items()} == {r.delta: r.word for r in resumed}
        # resumed deltas keep counting visited nodes from where they stopped
        stuck = {r.delta: r.visited for r in first if r.status == "budget"}
        for r in resumed:
            if r.delta in stuck:
                assert r.visited >= stuck[r.delta]

    def test_load_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something-else", "records": []}))
        with pytest.raises(DomainError):
            load_checkpoint(path)

    def test_parallel_matches_serial(self):
        serial = verify_conj12(16)
        parallel = verify_conj12(16, workers=2)
        assert [r.to_json() for r in serial] == [r.to_json() for r in parallel]


class TestDensity:
    def test_ten(self):
        res = density_scan(10, 50)
        assert (res.count_squarefree, res.count_bounded) == (3, 3)
        assert squarefree_n2_minus_1(10) == [2, 4, 6]

    def test_two(self):
        res = density_scan(2, 1)
        assert res.count_squarefree == 1 and res.count_bounded <= 1

    def test_sieve_matches_factoring(self):
        expected = [n for n in range(2, 1001) if all(e == 1 for e in factorint(n * n - 1).values())]
        assert squarefree_n2_minus_1(1000) == expected

    def test_counts_ordered(self):
        res = density_scan(300, 3)
        assert res.count_bounded <= res.count_squarefree <= 300
        assert res.count_bounded + len(res.misses) == res.count_squarefree
        assert res.to_json()["ratio"] == res.ratio

    def test_parallel_matches_serial(self):
        assert density_scan(400, 5, workers=2) == density_scan(400, 5)


class TestFib:
    def test_first_fields(self):
        report = fib_fields(30)
        assert report.fields[:2] == ((3, 10), (4, 6))
        assert report.distinct >= 10

    def test_divisibility_and_lifting(self):
        report = fib_fields(10)
        assert all(report.divisibility.values()) and set(report.divisibility) == {3, 5, 7, 11, 13}
        assert all(report.lifting.values())

    @pytest.mark.parametrize("n", range(3, 25))
    def test_fields_against_oracle(self, n):
        fields = dict(fib_fields(24).fields)
        assert fields[n] == squarefree_part(fibonacci(n) * fibonacci(n + 2))

    def test_fibonacci_values(self):
        assert [fibonacci(n) for n in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]

    def test_rejects_small(self):
        with pytest.raises(DomainError):
            fib_fields(2)


def test_expand_rational_agrees_with_euclid():
    for q in range(2, 60):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                assert list(expand_rational(p, q)) == euclid(p, q)
