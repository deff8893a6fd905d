"""Continued-fraction words: expansion, evaluation and normal forms.

A *word* is a tuple of partial quotients.  A periodic word ``w`` stands for
the purely periodic expansion [w, w, w, ...].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CertificationError, DomainError
from .exactnum import QuadraticSurd, in_field, is_square, squarefree_split

Word = tuple[int, ...]


@dataclass(frozen=True)
class CFExpansion:
    preperiod: Word
    period: Word

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    def __str__(self):
        return render_periodic(self.preperiod, self.period)


def as_word(digits: Iterable[int]) -> Word:
    return tuple(int(a) for a in digits)


def parse_word(text: str) -> Word:
    text = text.strip().strip("[]")
    if not text:
        return ()
    return tuple(int(s) for s in text.replace(";", ",").split(","))


def render_word(word: Sequence[int]) -> str:
    if not word:
        return "[]"
    head, *tail = word
    return f"[{head}; {', '.join(map(str, tail))}]" if tail else f"[{head}]"


def render_periodic(preperiod: Sequence[int], period: Sequence[int]) -> str:
    body = f"overline({', '.join(map(str, period))})"
    if preperiod:
        return f"[{', '.join(map(str, preperiod))} | {body}]"
    return f"[{body}]"


def expand_rational(num: int, den: int, last_one: bool = False) -> Word:
    """Finite expansion of num/den with num >= 0.

    By default the last quotient is >= 2 (unless the whole word is [0] or
    [1]); with ``last_one`` the final quotient a >= 2 is rewritten as a-1, 1.
    """
    if den <= 0:
        raise DomainError(f"denominator must be positive, got {den}")
    if num < 0:
        raise DomainError(f"numerator must be non-negative, got {num}")
    if math.gcd(num, den) != 1:
        raise DomainError(f"{num}/{den} is not in lowest terms")
    digits = []
    while den:
        a, rem = divmod(num, den)
        digits.append(a)
        num, den = den, rem
    if last_one and digits[-1] >= 2:
        digits[-1] -= 1
        digits.append(1)
    return tuple(digits)


def continuant(word: Sequence[int]) -> int:
    """K(a1, ..., an): denominator of [0; a1, ..., an]."""
    prev, cur = 0, 1
    for a in word:
        prev, cur = cur, a * cur + prev
    return cur


def rational_value(word: Sequence[int]):
    """Exact value of the finite expansion [a0; a1, ..., an]."""
    if not word:
        raise DomainError("empty word has no value")
    value = Fraction(word[-1])
    for a in reversed(word[:-1]):
        value = a + 1 / value
    return value


# ---------------------------------------------------------------------------
# quadratic irrationals
#
# Every irrational surd can be written x = (P + sqrt(D)) / Q with Q | D - P^2.
# With D fixed along one expansion, the pair (P, Q) identifies x uniquely, so
# it is used directly as the state for period detection.


def _reduced_state(x: QuadraticSurd) -> tuple[int, int, int]:
    if x.is_rational:
        raise DomainError(f"{x} is rational; use expand_rational")
    p, q, d, r = x.p, x.q, x.d, x.r
    big_d = q * q * d * r * r
    if q > 0:
        return p * r, r * r, big_d
    return -p * r, -r * r, big_d


def _floor_state(P: int, Q: int, root: int) -> int:
    if Q > 0:
        return (P + root) // Q
    return -((P + root) // -Q) - 1


def expand_surd(x: QuadraticSurd) -> CFExpansion:
    """Eventually periodic expansion of an irrational quadratic surd."""
    P, Q, D = _reduced_state(x)
    root = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    while (P, Q) not in seen:
        seen[P, Q] = len(digits)
        a = _floor_state(P, Q, root)
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[P, Q]
    return CFExpansion(tuple(digits[:start]), tuple(digits[start:]))


def word_matrix_entries(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Entries (a, b, c, d) of m(a1)...m(an) with m(i) = [[0, 1], [1, i]]."""
    a, b, c, d = 1, 0, 0, 1
    for x in word:
        a, b, c, d = b, a + x * b, d, c + x * d
    return a, b, c, d


def eval_periodic(word: Sequence[int], field: int | None = None) -> QuadraticSurd:
    """Value of the purely periodic expansion [overline(word)].

    When ``field`` is given the discriminant is checked against it instead of
    being factored, which keeps long words cheap.
    """
    word = as_word(word)
    if not word:
        raise DomainError("empty period")
    if min(word) < 1:
        raise DomainError(f"periodic word must have digits >= 1 (normalize first): {word}")
    a, b, c, d = word_matrix_entries(word)
    disc = (d - a) ** 2 + 4 * b * c
    if field is None:
        return QuadraticSurd.make(d - a, 1, disc, 2 * b)
    if not in_field(disc, field):
        raise DomainError(f"discriminant {disc} of {word} is not {field} times a square")
    return QuadraticSurd.make(d - a, math.isqrt(disc // field), field, 2 * b)


def field_of_word(word: Sequence[int]) -> int:
    a, b, c, d = word_matrix_entries(normalize(word, periodic=True))
    return squarefree_split((d - a) ** 2 + 4 * b * c)[0]


def _merge_zeros(word: Sequence[int]) -> list[int]:
    out: list[int] = []
    for x in word:
        if len(out) >= 2 and out[-1] == 0:
            out.pop()
            out.append(out.pop() + x)
        else:
            out.append(x)
    return out


def normalize(word: Sequence[int], periodic: bool = False) -> Word:
    """Remove zero quotients via x, 0, y -> x + y.

    Linear words keep a leading or trailing zero that has nothing to merge
    with.  Periodic words are treated cyclically and the result starts at
    the earliest surviving position.
    """
    word = list(as_word(word))
    if any(x < 0 for x in word):
        raise DomainError(f"negative quotient in {word}")
    if not periodic:
        return tuple(_merge_zeros(word))
    start = next((i for i, x in enumerate(word) if x), None)
    if start is None:
        raise DomainError("periodic word has no nonzero quotient")
    out = _merge_zeros(word[start:] + word[:start])
    while len(out) >= 3 and out[-1] == 0:
        out = [out[-2] + out[0]] + out[1:-2]
    if not out or out[-1] == 0:
        raise DomainError(f"periodic word {tuple(word)} collapses to a degenerate period")
    return tuple(out)


def canonical_rotation(word: Sequence[int]) -> Word:
    word = as_word(word)
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def primitive_period(word: Sequence[int]) -> Word:
    word = as_word(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def same_cycle(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when u and v are rotations of each other (after reducing to primitive periods)."""
    u, v = primitive_period(u), primitive_period(v)
    return len(u) == len(v) and canonical_rotation(u) == canonical_rotation(v)


def is_palindrome(word: Sequence[int]) -> bool:
    return tuple(word) == tuple(reversed(word))


@dataclass(frozen=True)
class QuasiPalindrome:
    holds: bool
    witness: Word | None = None


def _quasi_shape(period: Word) -> Word | None:
    n = len(period)
    for i in range(n):
        rot = period[i:] + period[:i]
        if is_palindrome(rot[1:]):
            return rot
    return None


def is_quasi_palindromic(x: QuadraticSurd) -> QuasiPalindrome:
    """Decide whether x > 1 has trace equal to its floor.

    When it does, the period is expanded and a rotation of the form
    (a0, palindrome) is returned as witness; disagreement between the two
    tests raises :class:`CertificationError`.
    """
    tr = x.trace()
    holds = x > 1 and tr.denominator == 1 and tr.numerator == x.floor()
    if not holds:
        return QuasiPalindrome(False)
    cf = expand_surd(x)
    witness = _quasi_shape(cf.period)
    if cf.preperiod or witness is None:
        raise CertificationError(f"{x} passes the trace test but its expansion {cf} lacks the shape")
    return QuasiPalindrome(True, witness)


def sqrt_plus_floor(delta: int) -> QuadraticSurd:
    """The surd sqrt(delta) + floor(sqrt(delta)) for non-square delta >= 2."""
    if delta < 2 or is_square(delta):
        raise DomainError(f"{delta} must be a non-square integer >= 2")
    return QuadraticSurd.make(math.isqrt(delta), 1, delta, 1)


def sqrt_period(delta: int) -> Word:
    """Period of sqrt(delta) + floor(sqrt(delta)); it starts with 2*floor(sqrt(delta))."""
    return expand_surd(sqrt_plus_floor(delta)).period
