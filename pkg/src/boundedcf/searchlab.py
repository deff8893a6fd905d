"""Searches over bounded partial quotients.

Zaremba-type searches look for p/q = [0; a1..an] with every ai <= m.  The
hot loops live in :mod:`boundedcf.kernels`; everything they return is
re-checked here with the exact continued-fraction routines.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import kernels
from .cfcore import Word, continuant, expand_rational, word_matrix_entries
from .errors import CertificationError, DomainError
from .exactnum import _primes_upto, is_squarefree, squarefree_part
from .families import suite_sym_spec, zaremba_to_periodic
from .matmonoid import gen
from .pell import pm1_solutions


@dataclass(frozen=True)
class ZarembaHit:
    q: int
    p: int
    word: Word

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "word": list(self.word)}


def _numerator(word: Word) -> int:
    return word_matrix_entries(word)[1]


def _verified_hit(q: int, word: Word, allowed) -> ZarembaHit:
    if continuant(word) != q or not all(x in allowed for x in word):
        raise CertificationError(f"kernel returned {word} for q={q}")
    p = _numerator(word)
    if math.gcd(p, q) != 1 or not 0 < p < q:
        raise CertificationError(f"numerator {p} of {word} is not a unit below {q}")
    return ZarembaHit(q, p, word)


def zaremba_search(q: int, m: int) -> ZarembaHit | None:
    """First word over 1..m (depth-first, ascending digits) with continuant q."""
    if q < 2 or m < 1:
        raise DomainError(f"need q >= 2 and m >= 1, got q={q}, m={m}")
    word = kernels.dfs_first(q, m)
    return None if word is None else _verified_hit(q, word, range(1, m + 1))


def zaremba_numerators(q: int, m: int) -> list[int]:
    """All p < q whose expansion p/q (either form) has quotients in 1..m."""
    if q < 2 or m < 1:
        raise DomainError(f"need q >= 2 and m >= 1, got q={q}, m={m}")
    return kernels.dfs_numerators(q, m)


def zaremba_brute(q: int, m: int) -> list[int]:
    """Same set as :func:`zaremba_numerators`, found by expanding every p/q."""
    out = []
    for p in range(1, q):
        if math.gcd(p, q) != 1:
            continue
        digits = expand_rational(p, q)[1:]
        if max(digits[:-1], default=0) <= m and digits[-1] <= m + 1:
            out.append(p)
    return out


def zaremba_constrained(q: int) -> ZarembaHit | None:
    """First word over {1, 2} that starts and ends with 2 and has continuant q."""
    if q < 2:
        raise DomainError(f"need q >= 2, got {q}")
    word = kernels.dfs_constrained_first(q)
    if word is None:
        return None
    if word[0] != 2 or word[-1] != 2:
        raise CertificationError(f"constrained kernel returned {word}")
    return _verified_hit(q, word, (1, 2))


# ---------------------------------------------------------------------------
# periodic words with quotients 1 and 2 in every real quadratic field

CHECKPOINT_FORMAT = "boundedcf.conj12/1"
DEFAULT_BUDGET = 50_000_000


@dataclass
class Conj12Record:
    delta: int
    status: str  # "witness" or "budget"
    pell_index: int
    visited: int
    c: int | None = None
    b: int | None = None
    a: int | None = None
    word: list[int] | None = None

    def to_json(self) -> dict:
        return asdict(self)


def _certify12(word: Word, b: int, c: int, delta: int):
    a = _numerator(word)
    last_one = word != expand_rational(a, c)[1:]
    inst = zaremba_to_periodic(a, b, c, delta, last_one=last_one)
    return inst if set(inst.word) <= {1, 2} else None


def _resolve_delta(delta: int, budget: int, start_index: int = 0, visited: int = 0) -> Conj12Record:
    spent = 0
    for index, sol in enumerate(pm1_solutions(delta)):
        if index < start_index or sol.x < 2:
            continue
        c, b = sol.x, sol.y
        skip = 0
        while spent < budget:
            # the endpoint filter in the kernel is necessary but, for very
            # short words, not sufficient; rejected matches are skipped
            word, nodes = kernels.search12(c, budget - spent, skip)
            spent += nodes
            if word is None:
                break
            inst = _certify12(tuple(word), b, c, delta)
            if inst is not None:
                return Conj12Record(delta, "witness", index, visited + spent, c, b, inst.a, list(inst.word))
            skip += 1
        if spent >= budget:
            return Conj12Record(delta, "budget", index, visited + spent)
    raise AssertionError("unreachable: Pell solutions never run out")


def _resolve_job(job):
    return _resolve_delta(*job)


def _write_checkpoint(path: Path, budget: int, records: dict[int, Conj12Record]) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "budget": budget,
        "records": [records[d].to_json() for d in sorted(records)],
    }
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, indent=1)
    os.replace(tmp, path)


def load_checkpoint(path: Path) -> dict[int, Conj12Record]:
    data = json.loads(Path(path).read_text())
    if data.get("format") != CHECKPOINT_FORMAT:
        raise DomainError(f"{path} is not a {CHECKPOINT_FORMAT} checkpoint")
    return {r["delta"]: Conj12Record(**r) for r in data["records"]}


def conj12_deltas(delta_max: int) -> list[int]:
    """Squarefree delta in [2, delta_max); every real quadratic field appears once."""
    return [d for d in range(2, delta_max) if is_squarefree(d)]


def verify_conj12(
    delta_max: int,
    budget: int = DEFAULT_BUDGET,
    checkpoint: str | Path | None = None,
    resume: bool = False,
    workers: int = 1,
) -> list[Conj12Record]:
    """For each squarefree delta < delta_max, look for a periodic word with
    quotients in {1, 2} whose value lies in Q(sqrt(delta)).

    Denominators c run through the Pell solutions c^2 - delta b^2 = +-1 in
    increasing order; each delta gets ``budget`` search nodes.  Deltas left
    at "budget" restart from their last Pell index on resume.
    """
    path = Path(checkpoint) if checkpoint else None
    records: dict[int, Conj12Record] = {}
    if resume and path and path.exists():
        records = load_checkpoint(path)
    jobs = []
    for delta in conj12_deltas(delta_max):
        old = records.get(delta)
        if old and old.status == "witness":
            continue
        jobs.append((delta, budget, old.pell_index if old else 0, old.visited if old else 0))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_resolve_job, jobs)
            for rec in results:
                records[rec.delta] = rec
                if path:
                    _write_checkpoint(path, budget, records)
    else:
        for job in jobs:
            rec = _resolve_job(job)
            records[rec.delta] = rec
            if path:
                _write_checkpoint(path, budget, records)
    return [records[d] for d in sorted(records) if d < delta_max]


# ---------------------------------------------------------------------------
# density of fields reached from n^2 - 1


@dataclass(frozen=True)
class DensityResult:
    N: int
    m: int
    count_squarefree: int
    count_bounded: int
    misses: tuple[int, ...]

    @property
    def ratio(self) -> float:
        return self.count_bounded / self.count_squarefree if self.count_squarefree else 0.0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "count_squarefree": self.count_squarefree,
            "count_bounded": self.count_bounded,
            "ratio": self.ratio,
            "misses": list(self.misses),
        }


def squarefree_n2_minus_1(N: int) -> list[int]:
    """All 2 <= n <= N with n^2 - 1 squarefree, by sieving n = +-1 mod p^2."""
    keep = bytearray([1]) * (N + 1)
    keep[0:2] = b"\x00\x00"
    keep[3::2] = bytearray(len(range(3, N + 1, 2)))  # odd n: 8 | n^2 - 1
    for p in _primes_upto(max(N, 2))[1:]:
        mod = p * p
        if mod - 1 > N + 1:
            break
        for r in (1, mod - 1):
            keep[r::mod] = bytearray(len(range(r, N + 1, mod)))
    keep[1] = 0
    return [n for n in range(2, N + 1) if keep[n]]


def _density_one(job):
    n, m = job
    hit = zaremba_search(n, m)
    if hit is None:
        return n, False
    last_one = hit.word != expand_rational(hit.p, n)[1:]
    inst = zaremba_to_periodic(hit.p, 1, n, n * n - 1, last_one=last_one)
    return n, max(inst.word) <= m + 1


def density_scan(N: int, m: int, workers: int = 1) -> DensityResult:
    """Count n <= N with n^2 - 1 squarefree and, among them, those whose
    field Q(sqrt(n^2 - 1)) gets a periodic word with quotients <= m + 1."""
    if N < 2 or m < 1:
        raise DomainError(f"need N >= 2 and m >= 1, got N={N}, m={m}")
    ns = squarefree_n2_minus_1(N)
    jobs = [(n, m) for n in ns]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_density_one, jobs, chunksize=64))
    else:
        results = [_density_one(job) for job in jobs]
    misses = tuple(n for n, ok in results if not ok)
    return DensityResult(N, m, len(ns), len(ns) - len(misses), misses)


# ---------------------------------------------------------------------------
# Fibonacci fields


@dataclass(frozen=True)
class FibReport:
    fields: tuple[tuple[int, int], ...]  # (n, squarefree part of f_n f_{n+2})
    divisibility: dict[int, bool]  # p | f_o with o = (p^2 - 1)(p^2 - p)
    lifting: dict[int, bool]  # v_p(f_{p r}) = v_p(f_r) + 1 at the rank r of p

    @property
    def distinct(self) -> int:
        return len({d for _, d in self.fields})

    def to_json(self) -> dict:
        return {
            "fields": [list(x) for x in self.fields],
            "distinct": self.distinct,
            "divisibility": {str(p): ok for p, ok in self.divisibility.items()},
            "lifting": {str(p): ok for p, ok in self.lifting.items()},
        }


def fibonacci(n: int) -> int:
    """f_n read off m(1)^n = [[f_{n-1}, f_n], [f_n, f_{n+1}]]."""
    return (gen(1) ** n).b


def _fib_mod(n: int, mod: int) -> int:
    a, b, c, d = 1, 0, 0, 1
    x, y, z, w = 0, 1, 1, 1
    while n:
        if n & 1:
            a, b, c, d = (a * x + b * z) % mod, (a * y + b * w) % mod, (c * x + d * z) % mod, (c * y + d * w) % mod
        x, y, z, w = (x * x + y * z) % mod, (x * y + y * w) % mod, (z * x + w * z) % mod, (z * y + w * w) % mod
        n >>= 1
    return b


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


FIB_PRIMES = (3, 5, 7, 11, 13)


def fib_fields(n_max: int, primes=FIB_PRIMES) -> FibReport:
    if n_max < 3:
        raise DomainError(f"need n_max >= 3, got {n_max}")
    fib = [0, 1]
    while len(fib) < n_max + 3:
        fib.append(fib[-1] + fib[-2])
    fields = []
    for n in range(3, n_max + 1):
        if fibonacci(n) != fib[n]:
            raise CertificationError(f"matrix and recurrence disagree on f_{n}")
        delta = squarefree_part(fib[n] * fib[n + 2])
        if n >= 5 and suite_sym_spec((1,) * (n - 5)).field != delta:
            raise CertificationError(f"all-ones family misses Q(sqrt({delta})) at n={n}")
        fields.append((n, delta))
    divisibility = {p: _fib_mod((p * p - 1) * (p * p - p), p) == 0 for p in primes}
    lifting = {}
    for p in primes:
        rank = next(r for r in range(1, 2 * p + 3) if _fib_mod(r, p) == 0)
        lifting[p] = _valuation(fibonacci(p * rank), p) == _valuation(fibonacci(rank), p) + 1
    return FibReport(tuple(fields), divisibility, lifting)
