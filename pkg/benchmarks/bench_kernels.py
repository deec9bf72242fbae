"""Compiled vs pure-Python modular elimination on intertwiner systems.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from steinerlab import _kernels_py
from steinerlab.endo import build_graded_system, build_system
from steinerlab.exactla import DEFAULT_PRIMES, make_rng
from steinerlab.numtheory import BundleShape
from steinerlab.pencil import sample_graded, sample_pencil

try:
    from array import array

    from steinerlab import _kernels
except ImportError:
    _kernels = None

CASES = [
    ("steiner 3 3 8", lambda rng: build_system(sample_pencil(rng, BundleShape(3, 3, 8)))),
    ("graded 3 [2,1,1,1,1] 16", lambda rng: build_graded_system(sample_graded(rng, 3, [2, 1, 1, 1, 1], 16))),
    ("steiner 4 4 12", lambda rng: build_system(sample_pencil(rng, BundleShape(4, 4, 12)))),
    ("steiner 3 8 21", lambda rng: build_system(sample_pencil(rng, BundleShape(3, 8, 21)))),
]


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    p = DEFAULT_PRIMES[0]
    print(f"{'case':26} {'shape':>11} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, make in CASES:
        system = make(make_rng(0))
        rows, cols = system.equations, system.unknowns
        flat = [x % p for row in system.rows for x in row]
        t_py, r_py = best_of(lambda: _kernels_py.rank_mod_p_buffer(flat, rows, cols, p), args.repeat)
        if _kernels is None:
            print(f"{name:26} {rows:>5}x{cols:<5} {t_py:>10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        t_c, r_c = best_of(lambda: _kernels.rank_mod_p_buffer(array("Q", flat), rows, cols, p), args.repeat)
        assert r_py == r_c, (name, r_py, r_c)
        print(f"{name:26} {rows:>5}x{cols:<5} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
