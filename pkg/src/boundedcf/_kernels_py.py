"""Pure-Python search kernels (reference implementation and fallback).

All searches walk words a1, a2, ... depth first with ascending digits while
tracking the bottom row (g, d) of m(a1)...m(ak); d is the continuant
K(a1..ak) and appending x maps (g, d) to (d, g + x d).
"""

from __future__ import annotations

import math

BACKEND = "python"

# below this size search12 enumerates whole words instead of splitting them
SMALL_TARGET = 4096


def dfs_first(q: int, m: int):
    """First word over 1..m (ascending DFS order) with continuant q, or None."""
    word: list[int] = []
    gs, ds = [0], [1]
    nxt = [1]
    while nxt:
        x = nxt[-1]
        g, d = gs[-1], ds[-1]
        nd = g + x * d
        if x > m or nd > q:
            nxt.pop()
            gs.pop()
            ds.pop()
            if word:
                word.pop()
            continue
        nxt[-1] = x + 1
        word.append(x)
        if nd == q:
            return tuple(word)
        gs.append(d)
        ds.append(nd)
        nxt.append(1)
    return None


def dfs_numerators(q: int, m: int) -> list[int]:
    """Every p with p/q = [0; a1..an], all ai in 1..m (either representation)."""
    found = set()

    def walk(a, b, g, d):
        for x in range(1, m + 1):
            nd = g + x * d
            if nd > q:
                return
            nb = a + x * b
            if nd == q:
                found.add(nb)
            else:
                walk(b, nb, d, nd)

    walk(1, 0, 0, 1)
    return sorted(found)


def dfs_constrained_first(q: int):
    """First word over {1, 2} starting and ending with 2 whose continuant is q."""

    def walk(word, g, d):
        for x in (1, 2):
            nd = g + x * d
            if nd > q:
                return None
            word.append(x)
            if nd == q and x == 2:
                return tuple(word)
            hit = walk(word, d, nd)
            if hit:
                return hit
            word.pop()
        return None

    if q == 2:
        return (2,)
    return walk([2], 1, 2) if q > 2 else None


def _ends_ok(word) -> bool:
    return word[-1] == 2 or (len(word) >= 2 and word[-1] == word[-2] == 1)


def _tail_word(num: int, den: int):
    """Digits of num/den = [0; b1..bk] when all lie in {1, 2}, else None."""
    if num == den:
        return (1,) if num == 1 else None
    digits = []
    while num:
        a, rem = divmod(den, num)
        if a > 2:
            return None
        digits.append(a)
        den, num = num, rem
    return tuple(digits) if den == 1 else None


def search12(c: int, budget: int, skip: int = 0):
    """Find a word over {1, 2} with continuant c whose start is (2) or (1, 1)
    and whose end is (2) or (1, 1).

    Returns ``(word or None, nodes)``; ``skip`` passes over that many
    earlier matches.  Large targets are split as w1 w2
    where w1 is the shortest prefix with continuant >= sqrt(c); w2 is then
    pinned down by a linear equation and read off by Euclid.
    """
    nodes = 0
    pending = skip
    small = c < SMALL_TARGET
    split = 0 if small else math.isqrt(c)
    word: list[int] = []

    def accept(full):
        nonlocal pending
        if pending:
            pending -= 1
            return None
        return full

    def frontier(g, d):
        nonlocal nodes
        if d == c:
            return accept(tuple(word)) if _ends_ok(word) else None
        lo = -(-c // (g + d))
        hi = 3 * c // (g + 3 * d)
        r0 = (c % g) * pow(d % g, -1, g) % g if g > 1 else 0
        tail_d = lo + (r0 - lo) % g if g > 1 else lo
        while tail_d <= hi:
            nodes += 1
            tail_b = (c - d * tail_d) // g
            if 0 < tail_b <= tail_d:
                tail = _tail_word(tail_b, tail_d)
                if tail is not None:
                    full = tuple(word) + tail
                    if _ends_ok(full) and accept(full):
                        return full
            tail_d += g
        return None

    def walk(g, d):
        nonlocal nodes
        for x in (1, 2):
            if len(word) == 1 and word[0] == 1 and x == 2:
                break
            nd = g + x * d
            if nd > c:
                return None
            nodes += 1
            if nodes > budget:
                raise _Exhausted
            word.append(x)
            if small:
                hit = accept(tuple(word)) if nd == c and _prefix_ok(word) and _ends_ok(word) else None
                if hit is None and nd < c:
                    hit = walk(d, nd)
            elif nd >= split:
                hit = frontier(d, nd)
            else:
                hit = walk(d, nd)
            if hit:
                return hit
            word.pop()
        return None

    try:
        return walk(0, 1), nodes
    except _Exhausted:
        return None, nodes


def _prefix_ok(word) -> bool:
    return word[0] == 2 or (len(word) >= 2 and word[0] == word[1] == 1)


class _Exhausted(Exception):
    pass
