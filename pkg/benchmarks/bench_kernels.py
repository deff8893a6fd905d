"""Time the compiled search kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import timeit

from boundedcf import _kernels_py as pure

try:
    from boundedcf import _kernels as compiled
except ImportError:
    compiled = None

CASES = [
    ("dfs_numerators q=20000 m=5", "dfs_numerators", (20000, 5)),
    ("dfs_first q=2..3000 m=3", "dfs_first_sweep", (3000, 3)),
    ("search12 c=3363 (exhaustive)", "search12", (3363, 10**8)),
    ("search12 c=6681448801 (split)", "search12", (6681448801, 10**8)),
    ("search12 c=1175993762661217 (split)", "search12", (1175993762661217, 10**8)),
]


def _call(module, name, args):
    if name == "dfs_first_sweep":
        top, m = args
        return [module.dfs_first(q, m) for q in range(2, top)]
    return getattr(module, name)(*args)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if compiled is None:
        print("compiled kernels are not built; only the Python timings are shown")
    print(f"{'case':40s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for label, name, call_args in CASES:
        t_py = min(timeit.repeat(lambda: _call(pure, name, call_args), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:40s} {t_py:10.3f}")
            continue
        if _call(pure, name, call_args) != _call(compiled, name, call_args):
            raise SystemExit(f"backends disagree on {label}")
        t_c = min(timeit.repeat(lambda: _call(compiled, name, call_args), number=1, repeat=args.repeat))
        print(f"{label:40s} {t_py:10.3f} {t_c:11.3f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
