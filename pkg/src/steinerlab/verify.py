"""Pinned regression checks against the values the theory predicts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from math import isqrt
from typing import Callable

from .endo import chi_end_graded, graded_intertwiner_dim, intertwiner_dim
from .exactla import make_rng
from .numtheory import BundleShape, fib_pairs, fib_sequence, pell_solutions
from .pencil import sample_graded, sample_pencil


def load_golden(path=None) -> dict:
    if path is None:
        text = resources.files("steinerlab").joinpath("data/golden.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def brute_pell(N: int, s_bound: int) -> list[tuple[int, int]]:
    D = N * N - 4
    out = []
    for s in range(s_bound + 1):
        rr = 4 + D * s * s
        r = isqrt(rr)
        if r * r == rr:
            out.append((r, s))
    return out


def brute_pairs(N: int, t_bound: int) -> list[tuple[int, int]]:
    return [(s, t) for t in range(1, t_bound + 1) for s in range(t)
            if s * s - N * s * t + t * t == 1]


@dataclass
class Check:
    name: str
    description: str
    run: Callable[[], tuple[bool, str]]


def build_checks(golden: dict) -> list[Check]:
    checks = []
    mx = golden["mixed_example"]

    def mixed_chi():
        got = chi_end_graded(mx["N"], mx["twists"], mx["t"])
        return got == mx["chi_end"], f"chi={got}, expected {mx['chi_end']}"

    def mixed_h0():
        rng = make_rng(mx["seed"])
        dims = [graded_intertwiner_dim(sample_graded(rng, mx["N"], mx["twists"], mx["t"])).dim
                for _ in range(mx["samples"])]
        return all(d == mx["h0"] for d in dims), f"dims={dims}, expected {mx['h0']}"

    checks.append(Check("mixed_chi", "chi(End F) of the mixed-twist resolution", mixed_chi))
    checks.append(Check("mixed_h0", "h0(End F) of generic mixed-twist resolutions", mixed_h0))

    for key, expected in sorted(golden["fib"].items()):
        N = int(key)

        def fib_check(N=N, expected=expected):
            got = fib_sequence(N, len(expected) - 1)
            return got == expected, f"got {got}"

        checks.append(Check(f"fib_N{N}", f"generalized Fibonacci numbers for N={N}", fib_check))

    for key, spec in sorted(golden["pell"].items()):
        N = int(key)

        def pell_check(N=N, spec=spec):
            expected = [tuple(x) for x in spec["solutions"]]
            got = [(p.r, p.s) for p in pell_solutions(N, spec["s_bound"])]
            brute = brute_pell(N, spec["s_bound"])
            ok = got == expected == brute
            return ok, f"recurrence={got}, brute={brute}, golden={expected}"

        def pairs_check(N=N, bound=300):
            derived = [(p.s, p.t) for p in pell_solutions(N, bound) if p.t <= bound]
            fp = fib_pairs(N, bound)
            brute = brute_pairs(N, bound)
            return derived == fp == brute, f"pell-derived={derived}, fib_pairs={fp}, brute={brute}"

        checks.append(Check(f"pell_N{N}", f"Pell solutions for N={N}", pell_check))
        checks.append(Check(f"pairs_N{N}", f"Pell-derived pairs are Fibonacci pairs, N={N}", pairs_check))

    for ex in golden["exceptional_dims"]:
        shape = BundleShape(ex["N"], ex["s"], ex["t"])

        def exc_check(shape=shape, ex=ex):
            dim = intertwiner_dim(sample_pencil(make_rng(ex["seed"]), shape)).dim
            return dim == ex["dim"], f"dim={dim}, expected {ex['dim']}"

        checks.append(Check(f"exceptional_{shape.N}_{shape.s}_{shape.t}",
                            f"generic pencil at {shape} is simple", exc_check))
    return checks
