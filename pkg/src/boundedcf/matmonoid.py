"""2x2 integer matrices and the monoid generated by m(i) = [[0, 1], [1, i]].

A word (a1, ..., an) maps to m(a1)...m(an); its transpose is the reversed
word, and the fixed point of the word's Moebius map is the periodic
continued fraction [overline(a1, ..., an)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .cfcore import Word, word_matrix_entries
from .errors import CertificationError, DomainError
from .exactnum import squarefree_split


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, k: int) -> Mat2:
        if not isinstance(k, int):
            return NotImplemented
        return Mat2(k * self.a, k * self.b, k * self.c, k * self.d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Mat2:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = IDENTITY
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    @property
    def T(self) -> Mat2:
        return Mat2(self.a, self.c, self.b, self.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def dagger(self) -> Mat2:
        """Adjugate [[d, -b], [-c, a]], so that M @ M.dagger() = det(M) I."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Mat2:
        det = self.det()
        if det not in (1, -1):
            raise DomainError(f"{self} is not invertible over the integers")
        return self.dagger() * det

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def is_symmetric(self) -> bool:
        return self.b == self.c

    def to_json(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def from_json(cls, rows) -> Mat2:
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def parse(cls, text: str) -> Mat2:
        """Parse ``"a,b;c,d"``."""
        try:
            top, bottom = text.split(";")
            a, b = (int(s) for s in top.split(","))
            c, d = (int(s) for s in bottom.split(","))
        except ValueError as exc:
            raise DomainError(f"expected a matrix as 'a,b;c,d', got {text!r}") from exc
        return cls(a, b, c, d)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2(1, 0, 0, 1)
S0 = Mat2(0, -1, 1, 0)


def gen(i: int) -> Mat2:
    return Mat2(0, 1, 1, i)


def diag(x: int, y: int) -> Mat2:
    return Mat2(x, 0, 0, y)


def word_to_matrix(word: Sequence[int]) -> Mat2:
    return Mat2(*word_matrix_entries(word))


def is_positive(M: Mat2) -> bool:
    """Membership in the monoid generated by the m(i), i >= 1 (identity excluded)."""
    if abs(M.det()) != 1:
        raise DomainError(f"{M} does not have determinant +-1")
    a, b, c, d = M.entries()
    verdict = 0 <= a <= b <= d and a <= c <= d
    # equivalent formulation, kept as an independent guard
    if verdict != (min(a, b, c, d) >= 0 and abs(b - c) < d - a):
        raise CertificationError(f"positivity criteria disagree on {M}")
    return verdict


def factorize(M: Mat2) -> Word:
    """Unique word w with m(w) = M, for M in the monoid or the identity."""
    if M == IDENTITY:
        return ()
    if not is_positive(M):
        raise DomainError(f"{M} is not a product of generators m(i), i >= 1")
    digits = []
    a, b, c, d = M.entries()
    while (a, b, c, d) != (1, 0, 0, 1):
        q = min(b // a if a else b + d + 1, d // c if c else b + d + 1)
        if q < 1:
            raise DomainError(f"{M} left the monoid while peeling generators")
        digits.append(q)
        a, b, c, d = b - q * a, a, d - q * c, c
    return tuple(reversed(digits))


def discriminant(M: Mat2) -> int:
    return (M.d - M.a) ** 2 + 4 * M.b * M.c


def discr_and_field(M: Mat2) -> tuple[int, int, int]:
    """``(discr, delta, k)`` with discr = Tr^2 - 4 Det = delta * k^2, delta squarefree."""
    disc = discriminant(M)
    if disc <= 0:
        raise DomainError(f"{M} has non-positive discriminant {disc}")
    delta, k = squarefree_split(disc)
    return disc, delta, k


def det_sum_identity(P: Mat2, Q: Mat2) -> bool:
    """Check Det(P + Q) = Det P + Det Q + Tr(P Q^dagger)."""
    return (P + Q).det() == P.det() + Q.det() + (P @ Q.dagger()).trace()


# ---------------------------------------------------------------------------
# rank-one matrices


@dataclass(frozen=True)
class Rank1Factor:
    """H = m(P) diag(0, e) m(Q)."""

    P: Word
    e: int
    Q: Word

    @property
    def matrices(self) -> tuple[Mat2, Mat2]:
        return word_to_matrix(self.P), word_to_matrix(self.Q)

    def product(self) -> Mat2:
        P, Q = self.matrices
        return P @ diag(0, self.e) @ Q

    def to_json(self) -> dict:
        return {"P": list(self.P), "e": self.e, "Q": list(self.Q)}


def _merge_trailing_one(word: Word) -> Word:
    # m(n) m(1) diag(0, e) = m(n + 1) diag(0, e)
    if len(word) >= 2 and word[-1] == 1:
        return word[:-2] + (word[-2] + 1,)
    return word


def _second_column_word(x: int, y: int) -> Word:
    """Canonical word of a matrix in the monoid (or I) with second column (x, y)."""
    if x == 0:
        if y != 1:
            raise DomainError(f"column ({x}, {y}) is not primitive")
        return ()
    if x == 1:
        return (y,)
    u = pow(y, -1, x)
    v = (u * y - 1) // x
    for cu, cv in ((u, v), (x - u, y - v)):
        P = Mat2(cu, x, cv, y)
        if 0 <= cu < x and 0 <= cv < y and is_positive(P):
            return _merge_trailing_one(factorize(P))
    raise DomainError(f"no monoid matrix has second column ({x}, {y})")


def rank1_factor(H: Mat2) -> Rank1Factor:
    """Factor a nonzero singular H with 0 <= a <= b <= d and a <= c <= d.

    The returned words avoid a P-suffix (n, 1) and a Q-prefix (1, n), which
    makes the factorization unique.
    """
    a, b, c, d = H.entries()
    if H.det() != 0 or H == Mat2(0, 0, 0, 0):
        raise DomainError(f"{H} is not a nonzero rank-one matrix")
    if not (0 <= a <= b <= d and a <= c <= d):
        raise DomainError(f"{H} violates 0 <= a <= b <= d, a <= c <= d")
    e = math.gcd(a, b, c, d)
    a, b, c, d = a // e, b // e, c // e, d // e
    x, y = math.gcd(a, b), math.gcd(c, d)
    z, t = (a // x, b // x) if x else (c // y, d // y)
    p_word = _second_column_word(x, y)
    q_word = tuple(reversed(_second_column_word(z, t)))
    out = Rank1Factor(p_word, e, q_word)
    if out.product() != H:
        raise CertificationError(f"rank-one factorization of {H} does not multiply back")
    return out


# ---------------------------------------------------------------------------
# symmetric-plus-rotation blocks


def sym_block(n: int, k: int) -> Mat2:
    """m(n-1, 1, k-1, n) = [[k, kn+1], [kn-1, kn^2]]."""
    return Mat2(k, k * n + 1, k * n - 1, k * n * n)


@dataclass(frozen=True)
class SymDecomp:
    """B (or its transpose, see ``transposed``) equals m(F) sym_block(n, k) m(F)^T."""

    F: Word
    n: int
    k: int
    transposed: bool

    @property
    def matrix_F(self) -> Mat2:
        return word_to_matrix(self.F)

    def rebuild(self) -> Mat2:
        F = self.matrix_F
        core = sym_block(self.n, self.k)
        return F @ (core.T if self.transposed else core) @ F.T


def sym_rank1_decomp(B: Mat2) -> SymDecomp:
    """Write B with B + B^T of rank one as F m(n-1, 1, k-1, n) F^T (up to transpose)."""
    if not is_positive(B):
        raise DomainError(f"{B} is not in the monoid")
    if B.det() != 1 or abs(B.b - B.c) != 2:
        raise DomainError(f"{B} + transpose is not of rank one")
    word = factorize(B)
    wrap = 0
    while 2 * (wrap + 1) <= len(word) and word[wrap] == word[-1 - wrap]:
        wrap += 1
    for j in range(wrap, -1, -1):
        core = word_to_matrix(word[j : len(word) - j])
        for transposed, block in ((False, core), (True, core.T)):
            k = block.a
            if k < 1 or (block.b - 1) % k:
                continue
            n = (block.b - 1) // k
            if n >= 1 and block == sym_block(n, k):
                out = SymDecomp(word[:j], n, k, transposed)
                if out.rebuild() != B:
                    raise CertificationError(f"block decomposition of {B} does not multiply back")
                return out
    raise CertificationError(f"{B} has rank-one symmetric part but no block decomposition")


@dataclass(frozen=True)
class ScaledH:
    """H = r * sqrt(s) * H0 together with lam, so that for every A

    Tr(B A C A^T) = r^2 s Tr(H0 A)^2 + lam Det(A).
    """

    H0: Mat2
    s: int
    r: int
    lam: int

    def trace_identity(self, B: Mat2, C: Mat2, A: Mat2) -> bool:
        lhs = (B @ A @ C @ A.T).trace()
        return lhs == self.r**2 * self.s * (self.H0 @ A).trace() ** 2 + self.lam * A.det()

    def to_json(self) -> dict:
        return {"H0": self.H0.to_json(), "s": self.s, "r": self.r, "lam": self.lam}


_PROBES = (IDENTITY, gen(1), gen(2), word_to_matrix((1, 2)), word_to_matrix((2, 1, 3)))


def compute_H(B: Mat2, C: Mat2) -> ScaledH:
    """Rank-one H with Tr(B A C A^T) = Tr(H A)^2 + lam Det(A)."""
    db, dc = sym_rank1_decomp(B), sym_rank1_decomp(C)
    H0 = dc.matrix_F @ gen(dc.n) @ diag(0, 1) @ gen(db.n) @ db.matrix_F.T
    s, r = squarefree_split(db.k * dc.k)
    eps_b, eps_c = (B.c - B.b) // 2, (C.c - C.b) // 2
    out = ScaledH(H0, s, r, -2 * eps_b * eps_c)
    for A in _PROBES:
        if not out.trace_identity(B, C, A):
            raise CertificationError(f"trace identity fails for B={B}, C={C} at A={A}")
    return out


# ---------------------------------------------------------------------------
# trace-zero companions


def _palindromic_splits(word: Word):
    for i in range(len(word) + 1):
        left, right = word[:i], word[i:]
        if left == left[::-1] and right == right[::-1]:
            yield left, right


def find_S(A: Mat2) -> Mat2:
    """S with Tr S = Tr(S A) = 0, |Det S| = 1, and Det S = -1 whenever Det A = 1.

    When A = M N with M, N palindromic words and one of them odd, the closed
    forms S0 N (M odd) or M S0 (N odd) are used.  Otherwise b | (d - a) is required and the first member of the
    Pell-type family is returned.
    """
    if not is_positive(A):
        raise DomainError(f"{A} is not in the monoid")
    word = factorize(A)
    splits = list(_palindromic_splits(word))
    # an odd-length left factor has det -1; if Det A = 1 the right one does too
    for left, right in splits:
        if len(left) % 2:
            return S0 @ word_to_matrix(right)
    for left, right in splits:
        if len(right) % 2:
            return word_to_matrix(left) @ S0
    if (A.d - A.a) % A.b:
        raise DomainError(f"{A}: b = {A.b} does not divide d - a = {A.d - A.a}")
    S = Mat2(1, 0, (A.d - A.a) // A.b, -1)
    if (S @ A).trace() != 0:
        raise CertificationError(f"{S} is not trace-orthogonal to {A}")
    return S


def h_from_s(S: Mat2, A: Mat2, power: int) -> Mat2:
    """H = S + A^power, checked to be rank one."""
    Ab = A**power
    if S.trace() != 0 or (S @ A).trace() != 0:
        raise DomainError(f"{S} is not trace-orthogonal to {A}")
    if S.det() != -Ab.det():
        raise DomainError(f"Det S = {S.det()} but Det A^{power} = {Ab.det()}")
    H = S + Ab
    if H.det() != 0 or H == Mat2(0, 0, 0, 0):
        raise CertificationError(f"{H} is not rank one")
    return H
