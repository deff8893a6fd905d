"""Infinite families of periodic words B A^n C A'^n inside one quadratic field.

A'^n is the reversed block (the transpose of m(A)^n) unless a family says
otherwise.  Every constructor certifies what it builds: the field of each
member is checked on the exact discriminant, never on floating point.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .cfcore import (
    Word,
    as_word,
    canonical_rotation,
    eval_periodic,
    expand_rational,
    is_palindrome,
    normalize,
    same_cycle,
)
from .errors import CertificationError, DomainError
from .exactnum import QuadraticSurd, in_field, is_square, squarefree_part
from .matmonoid import (
    IDENTITY,
    S0,
    Mat2,
    discriminant,
    factorize,
    is_positive,
    rank1_factor,
    word_to_matrix,
)
from .pell import pell_plus1

PROVENANCES = ("MN", "suites_ijM", "suite_sym", "suite_12s", "wilson", "intro")


@dataclass(frozen=True)
class FamilySpec:
    B: Word
    A: Word
    C: Word
    field: int
    transpose_C: bool = False
    mirror_tail: bool = True
    bound: int | None = None
    provenance: str = "MN"

    def blocks(self, n: int) -> Word:
        if n < 0:
            raise DomainError(f"family index must be >= 0, got {n}")
        middle = self.C[::-1] if self.transpose_C else self.C
        tail = self.A[::-1] if self.mirror_tail else self.A
        return self.B + self.A * n + middle + tail * n

    def word(self, n: int) -> Word:
        """Normalized member n, rotated to its lexicographically least form."""
        return canonical_rotation(normalize(self.blocks(n), periodic=True))

    def matrix(self, n: int) -> Mat2:
        return word_to_matrix(self.blocks(n))

    def to_json(self) -> dict:
        return {
            "B": list(self.B),
            "A": list(self.A),
            "C": list(self.C),
            "transposeC": self.transpose_C,
            "mirrorTail": self.mirror_tail,
            "field": self.field,
            "bound": self.bound,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> FamilySpec:
        provenance = data.get("provenance", "MN")
        if provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {provenance!r}")
        return cls(
            B=as_word(data["B"]),
            A=as_word(data["A"]),
            C=as_word(data["C"]),
            field=int(data["field"]),
            transpose_C=bool(data.get("transposeC", False)),
            mirror_tail=bool(data.get("mirrorTail", True)),
            bound=data.get("bound"),
            provenance=provenance,
        )


def family_word(spec: FamilySpec, n: int) -> Word:
    return spec.word(n)


@dataclass(frozen=True)
class MemberRecord:
    n: int
    length: int
    max_digit: int
    cofactor: int
    field_ok: bool
    bound_ok: bool

    @property
    def ok(self) -> bool:
        return self.field_ok and self.bound_ok

    def to_json(self) -> dict:
        return asdict(self) | {"ok": self.ok}


@dataclass(frozen=True)
class FamilyReport:
    spec: FamilySpec
    records: tuple[MemberRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def first_failure(self) -> MemberRecord | None:
        return next((r for r in self.records if not r.ok), None)


def certify_family(spec: FamilySpec, n_max: int) -> FamilyReport:
    """Check members 0..n_max: field via exact discriminant, digits against the bound."""
    records = []
    for n in range(n_max + 1):
        word = spec.word(n)
        disc = discriminant(spec.matrix(n))
        field_ok = in_field(disc, spec.field)
        cofactor = math.isqrt(disc // spec.field) if field_ok else 0
        top = max(word)
        records.append(
            MemberRecord(n, len(word), top, cofactor, field_ok, spec.bound is None or top <= spec.bound)
        )
    return FamilyReport(spec, tuple(records))


def distinct_members(spec: FamilySpec, n_max: int) -> int:
    """How many different surds the members 0..n_max evaluate to."""
    return len({eval_periodic(spec.word(n), field=spec.field) for n in range(n_max + 1)})


def _require_certified(spec: FamilySpec, n_max: int) -> FamilySpec:
    report = certify_family(spec, n_max)
    bad = report.first_failure()
    if bad is not None:
        raise CertificationError(f"{spec.provenance} family fails at n={bad.n}: {bad}")
    return spec


# ---------------------------------------------------------------------------
# the M N construction


@dataclass(frozen=True)
class MNConstruction:
    spec: FamilySpec
    k: int
    H: Mat2
    P: Word
    e: int
    Q: Word
    swapped: bool


def _det_sign(word: Word) -> int:
    return -1 if len(word) % 2 else 1


def _block_from_rank1(P: Word, e: int, Q: Word) -> tuple[Word, Word]:
    F, i = P[:-1], P[-1]
    G, j = Q[1:], Q[0]
    core_b = (j - 1, 1, e - 1, j) if _det_sign(G) == 1 else (j, e - 1, 1, j - 1)
    core_c = (i - 1, 1, e - 1, i) if _det_sign(F) == 1 else (i, e - 1, 1, i - 1)
    # e = 1 leaves an interior zero; merging it keeps the matrix
    return normalize(G[::-1] + core_b + G), normalize(F + core_c + F[::-1])


def _symmetric_word(M: Mat2, allow_identity: bool) -> Word:
    if not M.is_symmetric():
        raise DomainError(f"{M} is not symmetric")
    if M == IDENTITY:
        if allow_identity:
            return ()
        raise DomainError("the identity is not allowed here")
    return factorize(M)


def mn_construct(M: Mat2, N: Mat2, certify_upto: int = 4, max_k: int = 40) -> MNConstruction:
    """Family in the field of A = M N from symmetric M (possibly I) and N.

    One of M, N must have determinant -1.  With X the factor of determinant
    -1 and Y the other one, H_k = X S0 + (X Y)^(2k) is rank one for k >= 3;
    the least such k whose factorization has outer exponents >= 2 yields
    the blocks B and C.
    """
    m_word = _symmetric_word(M, allow_identity=True)
    n_word = _symmetric_word(N, allow_identity=False)
    if M.det() == -1:
        X, Y, swapped = M, N, False
    elif N.det() == -1:
        X, Y, swapped = N, M, True
    else:
        raise DomainError("neither factor has determinant -1")
    A = X @ Y
    for k in range(3, max_k + 1):
        H = X @ S0 + A ** (2 * k)
        try:
            r = rank1_factor(H)
        except DomainError:
            continue
        if r.P and r.Q and r.P[-1] >= 2 and r.Q[0] >= 2:
            break
    else:
        raise CertificationError(f"no admissible H_k for k <= {max_k}")
    B_word, C_word = _block_from_rank1(r.P, r.e, r.Q)
    Bm, Cm = word_to_matrix(B_word), word_to_matrix(C_word)
    for n in range(certify_upto + 1):
        An = A**n
        lhs = (Bm @ An @ Cm @ An.T).trace()
        if lhs != (H @ An).trace() ** 2 - 2 * An.det():
            raise CertificationError(f"trace identity fails at n={n}")
        if (H @ An).trace() != (A ** (n + 2 * k)).trace():
            raise CertificationError(f"H trace ladder fails at n={n}")
    if swapped:
        # transpose the whole cyclic word so that the block reads M N
        B_word, C_word = C_word[::-1], B_word[::-1]
    a_word = factorize(M @ N)
    top = max(m_word + n_word)
    # all-ones seeds reach 4 (e = 1 merges j - 1 with j + 1) at every admissible k
    bound = 2 * top + 1 if top > 1 else 4
    spec = FamilySpec(
        B=B_word,
        A=a_word,
        C=C_word,
        field=squarefree_part(discriminant(M @ N)),
        bound=bound,
        provenance="MN",
    )
    _require_certified(spec, certify_upto)
    return MNConstruction(spec, k, H, r.P, r.e, r.Q, swapped)


def palindromic_split(word: Sequence[int]) -> tuple[Word, Word]:
    """Split word = M N with both parts palindromes and one of odd length."""
    word = as_word(word)
    for i in range(len(word)):
        left, right = word[:i], word[i:]
        if is_palindrome(left) and is_palindrome(right) and (len(left) % 2 or len(right) % 2):
            return left, right
    raise DomainError(f"{word} is not a product of two palindromes with one of odd length")


def mn_from_word(word: Sequence[int], certify_upto: int = 4) -> MNConstruction:
    """M N construction for a period such as a quasi-palindromic one (a0, palindrome)."""
    left, right = palindromic_split(word)
    return mn_construct(word_to_matrix(left), word_to_matrix(right), certify_upto)


# ---------------------------------------------------------------------------
# explicit families


def _check_palindrome(M: Sequence[int]) -> Word:
    M = as_word(M)
    if not is_palindrome(M):
        raise DomainError(f"{M} is not a palindrome")
    if any(x < 1 for x in M):
        raise DomainError(f"{M} has quotients < 1")
    return M


def suites_ijM_spec(i: int, j: int | None = None, M: Sequence[int] = (), template: int | None = None) -> FamilySpec:
    """Templates built from (i), (j, i) or (j, M, j, i); the parity of i picks the head."""
    M = _check_palindrome(M)
    if i < 1 or (j is not None and j < 1):
        raise DomainError("i and j must be >= 1")
    if template is None:
        template = 1 if j is None else (3 if M else 2)
    if template not in (1, 2, 3):
        raise DomainError(f"template must be 1, 2 or 3, got {template}")
    if template > 1 and j is None:
        raise DomainError(f"template {template} needs j")
    even = i % 2 == 0
    head = (i // 2 - 1, 1, 1, i // 2) if even else ((i - 1) // 2, 1, 3, (i - 1) // 2)
    if template == 1:
        A, C = (i,), ((i - 1, 1, 1, i) if even else (i + 1, i - 1))
        disc = i * i + 4
    elif template == 2:
        A, C = (j, i), ((j - 1, 1, 1, j) if even else (j + 1, j - 1))
        disc = (i * j) ** 2 + 4 * i * j
    else:
        A = (j,) + M + (j, i)
        C = (j,) + M + ((j - 1, 1, 1, j) if even else (j + 1, j - 1)) + M + (j,)
        disc = discriminant(word_to_matrix(A))
    return FamilySpec(head, A, C, squarefree_part(disc), provenance="suites_ijM")


def suites_ijM(
    i: int, n: int, j: int | None = None, M: Sequence[int] = (), template: int | None = None
) -> tuple[Word, int]:
    spec = suites_ijM_spec(i, j, M, template)
    _check_member(spec, n)
    return spec.word(n), spec.field


def suite_sym_spec(S: Sequence[int] = ()) -> FamilySpec:
    S = _check_palindrome(S)
    A = S + (1, 1, 2, 1, 1)
    C = S + (1, 2, 1, 1, 1, 1) + S
    return FamilySpec((2, 1, 1, 1), A, C, squarefree_part(discriminant(word_to_matrix(A))), provenance="suite_sym")


def suite_sym(S: Sequence[int], n: int) -> tuple[Word, int]:
    spec = suite_sym_spec(S)
    _check_member(spec, n)
    return spec.word(n), spec.field


def suite_12s_parameter(delta: int) -> int:
    """s = 3 y^2 delta - 1 from the least solution of x^2 - 9 delta y^2 = 1."""
    if delta < 2 or is_square(delta):
        raise DomainError(f"delta must be a non-square integer >= 2, got {delta}")
    sol = pell_plus1(9 * delta)
    return 3 * sol.y**2 * delta - 1


def suite_12s_spec(delta: int) -> FamilySpec:
    s = suite_12s_parameter(delta)
    spec = suite_sym_spec((s,))
    if spec.field != squarefree_part(delta):
        raise CertificationError(f"s = {s} lands in Q(sqrt({spec.field})), not Q(sqrt({delta}))")
    return FamilySpec(spec.B, spec.A, spec.C, spec.field, provenance="suite_12s")


def suite_12s(delta: int, n: int) -> tuple[int, Word, int]:
    spec = suite_12s_spec(delta)
    _check_member(spec, n)
    return spec.A[0], spec.word(n), spec.field


def wilson_spec(s: int, small_digits: bool = False) -> FamilySpec:
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    field = squarefree_part(s * (s + 4))
    if small_digits:
        return FamilySpec((s, 1, s - 1, s + 1), (1, s), (1, s + 1, s + 3, 1), field, provenance="wilson")
    return FamilySpec((s + 1, s * (s + 4) - 1), (1, s), (1, s + 2), field, provenance="wilson")


def wilson_family(s: int, n: int, small_digits: bool = False) -> tuple[Word, int]:
    spec = wilson_spec(s, small_digits)
    _check_member(spec, n)
    return spec.word(n), spec.field


INTRO_SPEC = FamilySpec((1, 1, 2, 1), (2, 1, 1), (1, 2), 10, mirror_tail=False, provenance="intro")


def _check_member(spec: FamilySpec, n: int) -> None:
    if not in_field(discriminant(spec.matrix(n)), spec.field):
        raise CertificationError(f"{spec.provenance} member {n} leaves Q(sqrt({spec.field}))")


# ---------------------------------------------------------------------------
# from rationals with Pell denominators to periodic words

_TWIST = Mat2(0, 1, -1, 2)  # m(1, 1, x - 1) m(x)^-1 for every x


@dataclass(frozen=True)
class ZarembaInstance:
    a: int
    b: int
    c: int
    delta: int
    digits: Word
    case: int
    matrix: Mat2
    word: Word
    surd: QuadraticSurd

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "delta": self.delta,
            "digits": list(self.digits),
            "case": self.case,
            "matrix": self.matrix.to_json(),
            "word": list(self.word),
            "surd": str(self.surd),
        }


def _zaremba_template(digits: Word, case: int) -> Word | None:
    first, *_ = digits
    mid, last = digits[1:-1], digits[-1]
    if case == 1:
        return (1, 1, first - 1) + digits[1:] + (1, 1, last - 1) + digits[:-1][::-1]
    if len(digits) < 2:
        return None
    return (1, 1, first - 1) + mid + (last - 1, 1, 1) + digits[::-1]


def zaremba_to_periodic(a: int, b: int, c: int, delta: int, last_one: bool = False) -> ZarembaInstance:
    """Periodic word of (c - a + b sqrt(delta)) / c when c^2 - delta b^2 = +-1.

    a/c = [0; a1..an] (with a final 1 when ``last_one``); the word is the
    factorization of T A T' A^T with A = m(a1..an), T = [[0, 1], [-1, 2]]
    and T' = T or T^T, whichever keeps the field.
    """
    if min(a, b, c, delta) < 1:
        raise DomainError("a, b, c, delta must be positive")
    if c * c - delta * b * b not in (1, -1):
        raise DomainError(f"{c}^2 - {delta}*{b}^2 is not +-1")
    if math.gcd(a, c) != 1 or a >= c:
        raise DomainError(f"need gcd(a, c) = 1 and a < c, got a={a}, c={c}")
    digits = expand_rational(a, c, last_one)[1:]
    A = word_to_matrix(digits)
    for case, T2 in ((1, _TWIST), (2, _TWIST.T)):
        P = _TWIST @ A @ T2 @ A.T
        if discriminant(P) == 16 * c * c * b * b * delta:
            break
    else:
        raise CertificationError(f"neither twist keeps Q(sqrt({delta})) for a={a}, c={c}")
    sigma = P.a - 2 * a * c
    if sigma not in (1, -1) or P != Mat2(
        2 * a * c + sigma, 2 * c * c, 4 * a * c - 2 * a * a + 2 * sigma, 4 * c * c - 2 * a * c + sigma
    ):
        raise CertificationError(f"{P} misses the closed form")
    if not is_positive(P):
        raise CertificationError(f"{P} is not in the monoid")
    word = factorize(P)
    template = _zaremba_template(digits, case)
    if template is not None and not same_cycle(normalize(template, periodic=True), word):
        raise CertificationError(f"template {template} disagrees with {word}")
    surd = QuadraticSurd.make(c - a, b, delta, c)
    if eval_periodic(word, field=squarefree_part(delta)) != surd:
        raise CertificationError(f"[overline {word}] is not {surd}")
    return ZarembaInstance(a, b, c, delta, digits, case, P, word, surd)
