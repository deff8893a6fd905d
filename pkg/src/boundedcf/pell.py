"""Pell equations x^2 - delta y^2 = +-1 and +-4, and the matching unit matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cfcore import sqrt_period
from .errors import CertificationError, DomainError
from .exactnum import is_square, squarefree_split
from .matmonoid import Mat2


@dataclass(frozen=True)
class PellSolution:
    x: int
    y: int
    rhs: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "rhs": self.rhs}


def _check_delta(delta: int) -> None:
    if delta < 2 or is_square(delta):
        raise DomainError(f"delta must be a non-square integer >= 2, got {delta}")


def fundamental_pm1(delta: int) -> PellSolution:
    """Least x, y > 0 with x^2 - delta y^2 = +-1, from the convergents of sqrt(delta)."""
    _check_delta(delta)
    period = sqrt_period(delta)
    digits = (period[0] // 2,) + period[1:]
    p0, p1, q0, q1 = 1, digits[0], 0, 1
    for a in digits[1:]:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    rhs = p1 * p1 - delta * q1 * q1
    if rhs not in (1, -1):
        raise CertificationError(f"convergent {p1}/{q1} misses the Pell equation for {delta}")
    return PellSolution(p1, q1, rhs)


def pell_plus1(delta: int) -> PellSolution:
    """Least positive solution of x^2 - delta y^2 = +1."""
    sol = fundamental_pm1(delta)
    if sol.rhs == 1:
        return sol
    return PellSolution(sol.x**2 + delta * sol.y**2, 2 * sol.x * sol.y, 1)


def pm1_solutions(delta: int):
    """All positive solutions of x^2 - delta y^2 = +-1 by increasing x."""
    sol = fundamental_pm1(delta)
    x, y, rhs = sol.x, sol.y, sol.rhs
    while True:
        yield PellSolution(x, y, rhs)
        x, y, rhs = x * sol.x + delta * y * sol.y, x * sol.y + y * sol.x, rhs * sol.rhs


def _icbrt(n: int) -> int:
    lo, hi = 0, 1 << (n.bit_length() // 3 + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**3 <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def fundamental_pm4(delta: int) -> PellSolution:
    """Least x, y > 0 with x^2 - delta y^2 = +-4.

    Such solutions are the units (x + y sqrt(delta)) / 2.  Unless both x and
    y are even they only exist for delta = 1 mod 4 or delta = 0 mod 4, and
    then the doubled +-1 solution is either the unit itself or its cube.
    """
    _check_delta(delta)
    if delta % 4 == 0:
        half = fundamental_pm1(delta // 4)
        return PellSolution(2 * half.x, half.y, 4 * half.rhs)
    base = fundamental_pm1(delta)
    doubled = PellSolution(2 * base.x, 2 * base.y, 4 * base.rhs)
    if delta % 4 != 1:
        return doubled
    # unit eps with eps^3 = x1 + y1 sqrt(delta): Tr(eps)^3 - 3 N Tr(eps) = 2 x1
    norm = base.rhs
    guess = _icbrt(2 * base.x)
    for t in range(max(1, guess - 2), guess + 3):
        if t**3 - 3 * norm * t != 2 * base.x:
            continue
        y2, rem = divmod(t * t - 4 * norm, delta)
        if rem == 0 and is_square(y2):
            return PellSolution(t, math.isqrt(y2), 4 * norm)
    return doubled


@dataclass(frozen=True)
class UnitMatrix:
    """Companion matrix of a unit power whose traces solve x^2 - delta y^2 = +-4."""

    matrix: Mat2
    delta: int
    field: int
    power: int

    def to_json(self) -> dict:
        return {"matrix": self.matrix.to_json(), "delta": self.delta, "field": self.field, "power": self.power}


def unit_matrix(delta: int) -> UnitMatrix:
    """Write delta = k^2 delta' and return the companion matrix of the least
    power of the fundamental unit of Q(sqrt(delta')) whose y-part is a
    multiple of k."""
    _check_delta(delta)
    field, k = squarefree_split(delta)
    base = fundamental_pm4(field)
    x, y, power = base.x, base.y, 1
    while y % k:
        x, y = (x * base.x + field * y * base.y) // 2, (x * base.y + y * base.x) // 2
        power += 1
    norm = (x * x - field * y * y) // 4
    return UnitMatrix(Mat2(0, -norm, 1, x), delta, field, power)


def trace_solutions(delta: int, count: int) -> list[int]:
    """Traces of U, U^2, ..., U^count; each is an x solving x^2 - delta y^2 = +-4."""
    U = unit_matrix(delta).matrix
    out, P = [], U
    for _ in range(count):
        x = P.trace()
        if not any(
            (x * x - rhs) % delta == 0 and is_square((x * x - rhs) // delta) for rhs in (4, -4)
        ):
            raise CertificationError(f"trace {x} does not solve the +-4 equation for {delta}")
        out.append(x)
        P = P @ U
    return out
