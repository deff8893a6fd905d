"""Dispatch between the compiled search kernels and the pure-Python ones.

The compiled module is used when it imports and the inputs fit in 64 bits;
set ``BOUNDEDCF_PURE=1`` to force the Python implementation.
"""

from __future__ import annotations

import os

from . import _kernels_py as pure

try:
    if os.environ.get("BOUNDEDCF_PURE"):
        raise ImportError("pure Python requested")
    from . import _kernels as compiled
except ImportError:
    compiled = None

BACKEND = compiled.BACKEND if compiled else pure.BACKEND
_LIMIT = 1 << 58


def _pick(*values):
    return compiled if compiled is not None and max(values) < _LIMIT else pure


def dfs_first(q: int, m: int):
    return _pick(q, m).dfs_first(q, m)


def dfs_numerators(q: int, m: int) -> list[int]:
    return _pick(q, m).dfs_numerators(q, m)


def dfs_constrained_first(q: int):
    return _pick(q).dfs_constrained_first(q)


def search12(c: int, budget: int, skip: int = 0):
    return _pick(c, budget).search12(c, budget, skip)
