# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contracts as ``_kernels_py`` for 64-bit inputs.

Callers must keep targets below ``LIMIT``; larger values go to the Python
implementation.
"""

from libc.math cimport sqrt
from libc.stdint cimport int64_t

BACKEND = "cython"

cdef enum:
    MAXDEPTH = 160

LIMIT = 1 << 58
SMALL_TARGET = 4096


cdef inline bint _ends_ok(int *word, int n):
    return word[n - 1] == 2 or (n >= 2 and word[n - 1] == 1 and word[n - 2] == 1)


cdef int64_t _inverse(int64_t a, int64_t m):
    cdef int64_t t = 0, nt = 1, r = m, nr = a, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += m
    return t


def dfs_first(int64_t q, int m):
    cdef int64_t gs[MAXDEPTH]
    cdef int64_t ds[MAXDEPTH]
    cdef int nxt[MAXDEPTH]
    cdef int level = 0, x
    cdef int64_t nd
    gs[0] = 0
    ds[0] = 1
    nxt[0] = 1
    while level >= 0:
        x = nxt[level]
        nd = gs[level] + x * ds[level]
        if x > m or nd > q:
            level -= 1
            continue
        nxt[level] = x + 1
        if nd == q:
            return tuple([nxt[i] - 1 for i in range(level + 1)])
        level += 1
        gs[level] = ds[level - 1]
        ds[level] = nd
        nxt[level] = 1
    return None


def dfs_numerators(int64_t q, int m):
    cdef int64_t as_[MAXDEPTH]
    cdef int64_t bs[MAXDEPTH]
    cdef int64_t gs[MAXDEPTH]
    cdef int64_t ds[MAXDEPTH]
    cdef int nxt[MAXDEPTH]
    cdef int level = 0, x
    cdef int64_t nd
    found = set()
    as_[0] = 1
    bs[0] = 0
    gs[0] = 0
    ds[0] = 1
    nxt[0] = 1
    while level >= 0:
        x = nxt[level]
        nd = gs[level] + x * ds[level]
        if x > m or nd > q:
            level -= 1
            continue
        nxt[level] = x + 1
        if nd == q:
            found.add(as_[level] + x * bs[level])
            continue
        level += 1
        as_[level] = bs[level - 1]
        bs[level] = as_[level - 1] + x * bs[level - 1]
        gs[level] = ds[level - 1]
        ds[level] = nd
        nxt[level] = 1
    return sorted(found)


def dfs_constrained_first(int64_t q):
    cdef int64_t gs[MAXDEPTH]
    cdef int64_t ds[MAXDEPTH]
    cdef int nxt[MAXDEPTH]
    cdef int level, x
    cdef int64_t nd
    if q == 2:
        return (2,)
    if q < 2:
        return None
    # level 0 is fixed to the digit 2
    level = 1
    gs[1] = 1
    ds[1] = 2
    nxt[1] = 1
    while level >= 1:
        x = nxt[level]
        nd = gs[level] + x * ds[level]
        if x > 2 or nd > q:
            level -= 1
            continue
        nxt[level] = x + 1
        if nd == q and x == 2:
            return (2,) + tuple([nxt[i] - 1 for i in range(1, level + 1)])
        level += 1
        gs[level] = ds[level - 1]
        ds[level] = nd
        nxt[level] = 1
    return None


cdef int _tail_word(int64_t num, int64_t den, int *out):
    """Write the digits of num/den = [0; b1..bk] into out when all are 1 or 2."""
    cdef int n = 0
    cdef int64_t a, rem
    if num == den:
        if num == 1:
            out[0] = 1
            return 1
        return -1
    while num:
        a = den // num
        rem = den - a * num
        if a > 2 or n >= MAXDEPTH:
            return -1
        out[n] = <int>a
        n += 1
        den = num
        num = rem
    return n if den == 1 else -1


def search12(int64_t c, int64_t budget, int64_t skip=0):
    cdef int64_t gs[MAXDEPTH]
    cdef int64_t ds[MAXDEPTH]
    cdef int nxt[MAXDEPTH]
    cdef int word[2 * MAXDEPTH]
    cdef int tail[MAXDEPTH]
    cdef int level = 0, x, n, k, i
    cdef int64_t nd, g, d, lo, hi, r0, tail_d, tail_b, nodes = 0
    cdef int64_t split
    cdef bint small = c < SMALL_TARGET
    if c >= LIMIT:
        raise OverflowError("target too large for the compiled kernel")
    split = 0
    if not small:
        split = <int64_t>sqrt(<double>c)
        while split * split > c:
            split -= 1
        while (split + 1) * (split + 1) <= c:
            split += 1
    gs[0] = 0
    ds[0] = 1
    nxt[0] = 1
    while level >= 0:
        x = nxt[level]
        if level == 1 and word[0] == 1 and x == 2:
            x = 3
        nd = gs[level] + x * ds[level]
        if x > 2 or nd > c:
            level -= 1
            continue
        nxt[level] = x + 1
        nodes += 1
        if nodes > budget:
            return None, nodes
        word[level] = x
        n = level + 1
        if small:
            if nd == c:
                if (word[0] == 2 or (n >= 2 and word[1] == 1)) and _ends_ok(word, n):
                    if skip == 0:
                        return tuple([word[i] for i in range(n)]), nodes
                    skip -= 1
                continue
        elif nd >= split:
            g = ds[level]
            d = nd
            if d == c:
                if _ends_ok(word, n):
                    if skip == 0:
                        return tuple([word[i] for i in range(n)]), nodes
                    skip -= 1
                continue
            lo = (c + g + d - 1) // (g + d)
            hi = 3 * c // (g + 3 * d)
            if g > 1:
                r0 = (c % g) * _inverse(d % g, g) % g
                tail_d = lo + ((r0 - lo) % g + g) % g
            else:
                tail_d = lo
            while tail_d <= hi:
                nodes += 1
                tail_b = (c - d * tail_d) // g
                if 0 < tail_b <= tail_d:
                    k = _tail_word(tail_b, tail_d, tail)
                    if k > 0:
                        for i in range(k):
                            word[n + i] = tail[i]
                        if _ends_ok(word, n + k):
                            if skip == 0:
                                return tuple([word[i] for i in range(n + k)]), nodes
                            skip -= 1
                tail_d += g
            continue
        level += 1
        gs[level] = ds[level - 1]
        ds[level] = nd
        nxt[level] = 1
    return None, nodes
