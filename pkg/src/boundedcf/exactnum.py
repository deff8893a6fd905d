"""Exact integer helpers and quadratic surds (p + q*sqrt(d)) / r."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, UnfactoredError

TRIAL_BOUND = 10**6
RHO_ITERATIONS = 2_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def isqrt(n: int) -> int:
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@lru_cache(maxsize=None)
def _primes_upto(bound: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24 thanks to the fixed bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int, max_iter: int) -> int | None:
    """Brent's variant of Pollard rho; returns a proper factor or None."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    for _ in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        spent = 0
        while g == 1 and spent < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factorize(n: int, trial_bound: int = TRIAL_BOUND, rho_iterations: int = RHO_ITERATIONS) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``.

    Trial division runs up to ``trial_bound``; larger cofactors go through
    Miller-Rabin and Pollard rho.  Raises :class:`UnfactoredError` when rho
    runs out of iterations.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    found: dict[int, int] = {}
    for p in _primes_upto(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n == 1:
        return found
    pending = [n]
    while pending:
        m = pending.pop()
        if m < trial_bound * trial_bound or is_probable_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            pending += [root, root]
            continue
        f = _rho(m, rho_iterations)
        if f is None:
            raise UnfactoredError(n, found, m)
        pending += [f, m // f]
    return found


def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = delta * k**2`` with ``delta`` squarefree; returns ``(delta, k)``."""
    if n < 1:
        raise DomainError(f"squarefree split needs a positive integer, got {n}")
    delta = k = 1
    for p, e in factorize(n).items():
        k *= p ** (e // 2)
        if e % 2:
            delta *= p
    return delta, k


def squarefree_part(n: int) -> int:
    return squarefree_split(n)[0]


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_split(n)[1] == 1


def in_field(discriminant: int, delta: int) -> bool:
    """True when ``discriminant`` is ``delta`` times a nonzero square.

    This decides membership in Q(sqrt(delta)) without factoring, which
    matters for the huge discriminants of long words.
    """
    if discriminant <= 0 or delta <= 0 or discriminant % delta:
        return False
    return is_square(discriminant // delta)


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number (p + q*sqrt(d)) / r in canonical form.

    Canonical means: r > 0, gcd(p, q, r) = 1, d squarefree and >= 2 when
    q != 0, and (q, d) == (0, 0) for rationals.  Build instances through
    :meth:`make` unless the parts are already canonical.
    """

    p: int
    q: int = 0
    d: int = 0
    r: int = 1

    @classmethod
    def make(cls, p: int, q: int = 0, d: int = 0, r: int = 1, squarefree: bool = False) -> QuadraticSurd:
        if r == 0:
            raise DomainError("zero denominator")
        if d < 0:
            raise DomainError(f"negative radicand {d}")
        if q == 0 or d == 0:
            q = d = 0
        else:
            if not squarefree:
                d, k = squarefree_split(d)
                q *= k
            if d == 1:
                p, q, d = p + q, 0, 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(p, q, r)
        return cls(p // g, q // g, d, r // g)

    @classmethod
    def rational(cls, value: int | Fraction) -> QuadraticSurd:
        value = Fraction(value)
        return cls(value.numerator, 0, 0, value.denominator)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def conjugate(self) -> QuadraticSurd:
        return QuadraticSurd(self.p, -self.q, self.d, self.r)

    def trace(self) -> Fraction:
        return Fraction(2 * self.p, self.r)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.d, self.r * self.r)

    def _radicand_with(self, other: QuadraticSurd) -> int:
        if self.q and other.q and self.d != other.d:
            raise DomainError(f"surds live in different fields: sqrt({self.d}) vs sqrt({other.d})")
        return self.d or other.d

    def _lift(self, other) -> QuadraticSurd:
        if isinstance(other, QuadraticSurd):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = self._radicand_with(other)
        return QuadraticSurd.make(
            self.p * other.r + other.p * self.r, self.q * other.r + other.q * self.r, d, self.r * other.r, True
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.d, self.r)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = self._radicand_with(other)
        return QuadraticSurd.make(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            d,
            self.r * other.r,
            True,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadraticSurd:
        den = self.p * self.p - self.q * self.q * self.d
        if den == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return QuadraticSurd.make(self.r * self.p, -self.r * self.q, self.d, den, True)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def sign(self) -> int:
        """Exact sign of the real value."""
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p >= 0 and q >= 0:
            return 1
        if p <= 0 and q <= 0:
            return -1
        # opposite signs: compare p^2 with q^2 d (never equal for squarefree d >= 2)
        bigger_rational = p * p > q * q * self.d
        return (1 if p > 0 else -1) if bigger_rational else (1 if q > 0 else -1)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def floor(self) -> int:
        if self.q == 0:
            return self.p // self.r
        root = math.isqrt(self.q * self.q * self.d)
        t = root if self.q > 0 else -root - 1
        return (self.p + t) // self.r

    def __floor__(self):
        return self.floor()

    def __float__(self):
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def approx(self, digits: int = 30) -> str:
        """Decimal string good to about ``digits`` places (debug aid only)."""
        scale = 10**digits
        whole = QuadraticSurd.make(self.p * scale, self.q * scale, self.d, self.r, True).floor()
        sign = "-" if whole < 0 else ""
        whole = abs(whole)
        return f"{sign}{whole // scale}.{whole % scale:0{digits}d}"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "d": self.d, "r": self.r}

    def __str__(self):
        if self.q == 0:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        mag = abs(self.q)
        root = f"√{self.d}" if mag == 1 else f"{mag}√{self.d}"
        if self.p == 0:
            num = root if self.q > 0 else f"-{root}"
            return num if self.r == 1 else f"{num}/{self.r}"
        num = f"{self.p} {'+' if self.q > 0 else '-'} {root}"
        return num if self.r == 1 else f"({num})/{self.r}"


def surd_normalize(p: int, q: int, d: int, r: int) -> QuadraticSurd:
    return QuadraticSurd.make(p, q, d, r)


def parse_surd(text: str) -> QuadraticSurd:
    """Parse ``"p,q,d,r"`` (or ``"p,q,d"`` with r = 1)."""
    parts = [int(s) for s in text.split(",")]
    if len(parts) == 3:
        parts.append(1)
    if len(parts) != 4:
        raise DomainError(f"expected p,q,d[,r], got {text!r}")
    return QuadraticSurd.make(*parts)
