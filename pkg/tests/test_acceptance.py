"""Exit criteria, one test per criterion; each prints a PASS/FAIL line in
the terminal summary."""

import os
import subprocess
import sys
import time

import pytest

from steinerlab.endo import (
    chi_end_graded,
    endo_cohomology,
    graded_intertwiner_dim,
    intertwiner_dim,
)
from steinerlab.exactla import make_rng
from steinerlab.experiment import ExperimentConfig, default_cells, run_sweep
from steinerlab.numtheory import BundleShape, chi_end, fib_pairs, pell_solutions
from steinerlab.pencil import (
    GradedResolution,
    block_witness,
    decomposable_witness,
    sample_graded,
    sample_pencil,
)

from conftest import ACCEPTANCE_LINES, unimodular

EXCEPTIONAL_CELLS = [(3, 1, 3), (3, 3, 8), (4, 1, 4), (5, 1, 5)]


def record(n, ok, detail, elapsed=None, limit=None):
    timing = f" [{elapsed:.2f}s < {limit}s]" if elapsed is not None else ""
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}{timing}")


def test_criterion_1_mixed_counterexample():
    t0 = time.perf_counter()
    chi = chi_end_graded(3, [2, 1, 1, 1, 1], 16)
    rng = make_rng(2026)
    dims = [graded_intertwiner_dim(sample_graded(rng, 3, [2, 1, 1, 1, 1], 16)).dim
            for _ in range(5)]
    elapsed = time.perf_counter() - t0
    ok = chi == -3 and dims == [5] * 5 and elapsed < 5
    record(1, ok, f"chi={chi} h0 samples={dims}", elapsed, 5)
    assert chi == -3
    assert dims == [5] * 5
    assert elapsed < 5


def test_criterion_2_pell_fibonacci_equivalence():
    t0 = time.perf_counter()
    mismatches = []
    for N in range(3, 11):
        brute = {(s, t) for t in range(1, 301) for s in range(t)
                 if s * s - N * s * t + t * t == 1}
        fib = set(fib_pairs(N, 300))
        pell = {(p.s, p.t) for p in pell_solutions(N, 300) if p.t <= 300}
        if not brute == fib == pell:
            mismatches.append(N)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 1
    record(2, ok, f"N=3..10 set equality, mismatches={mismatches}", elapsed, 1)
    assert not mismatches
    assert elapsed < 1


@pytest.fixture(scope="module")
def simplicity_run():
    t0 = time.perf_counter()
    cells = default_cells((3, 4, 5), s_max=4, t_max=12)
    rows = run_sweep(ExperimentConfig(cells, samples=5, seed=20260101))
    witness_dims = []
    rng = make_rng(99)
    for N, s, t in cells:
        shape = BundleShape(N, s, t)
        if chi_end(shape) < 2:
            continue
        if t - s > N - 1:
            w = decomposable_witness(rng, shape)
            witness_dims.append(((N, s, t), "decomposable", intertwiner_dim(w.pencil).dim))
        for n1 in range(1, s):
            for m1 in range(1, t):
                w = block_witness(rng, N, n1, s - n1, m1, t - m1)
                witness_dims.append(((N, s, t), f"block{w.blocks}", intertwiner_dim(w.pencil).dim))
        for lo, hi in ((0, 1), (-1, 1)):
            p = sample_pencil(rng, shape, lo, hi)
            witness_dims.append(((N, s, t), f"sparse[{lo},{hi}]", intertwiner_dim(p).dim))
    return rows, witness_dims, time.perf_counter() - t0


def test_criterion_3_simple_side(simplicity_run):
    rows, _, elapsed = simplicity_run
    simple = [r for r in rows if r.chi_end <= 1]
    assert all(r.status == "ok" for r in rows)
    total = sum(r.samples for r in simple)
    ones = sum(r.dims_histogram.get(1, 0) for r in simple)
    exc = {(r.N, r.s, r.t): r for r in simple if (r.N, r.s, r.t) in EXCEPTIONAL_CELLS}
    exc_ok = len(exc) == 4 and all(r.fraction_dim_1 == 1.0 for r in exc.values())
    frac = ones / total
    ok = frac >= 0.95 and exc_ok and elapsed < 60
    record(3, ok, f"dim=1 in {ones}/{total} samples over {len(simple)} cells "
                  f"({frac:.3f} >= 0.95); exceptional cells all 1: {exc_ok}", elapsed, 60)
    assert len(exc) == 4
    assert frac >= 0.95
    assert exc_ok
    assert elapsed < 60


def test_criterion_4_converse_side(simplicity_run):
    rows, witness_dims, _ = simplicity_run
    bad = [(r.N, r.s, r.t, r.min_dim) for r in rows if r.chi_end >= 2 and r.min_dim < 2]
    bad += [w for w in witness_dims if w[2] < 2]
    n_random = sum(r.samples for r in rows if r.chi_end >= 2)
    ok = not bad
    record(4, ok, f"{n_random} random + {len(witness_dims)} structured pencils at chi>=2, "
                  f"exceptions={bad}")
    assert not bad


def test_criterion_5_exceptional_cohomology():
    t0 = time.perf_counter()
    got = {}
    for s, t in ((3, 8), (8, 21)):
        c = endo_cohomology(sample_pencil(make_rng(5), BundleShape(3, s, t)))
        got[s, t] = (c.h0, c.h1, c.chi)
    elapsed = time.perf_counter() - t0
    ok = all(v == (1, 0, 1) for v in got.values()) and elapsed < 30
    record(5, ok, f"(h0, h1, chi) = {got}", elapsed, 30)
    assert got == {(3, 8): (1, 0, 1), (8, 21): (1, 0, 1)}
    assert elapsed < 30


def test_criterion_6_reduction_identity():
    t0 = time.perf_counter()
    rng = make_rng(606)
    mismatches = []
    for i in range(50):
        N = rng.randint(3, 5)
        s = rng.randint(1, 4)
        t = rng.randint(s + 1, 10)
        lo, hi = ((-9, 9), (0, 1))[i % 2]
        res = sample_graded(rng, N, [1] * s, t, lo, hi)
        pencil = res.to_pencil()
        if not pencil.full_column_rank():
            res = GradedResolution.from_pencil(sample_pencil(rng, pencil.shape))
            pencil = res.to_pencil()
        g = graded_intertwiner_dim(res).dim
        p = intertwiner_dim(pencil).dim
        if g != p:
            mismatches.append((N, s, t, g, p))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 10
    record(6, ok, f"50 all-ones resolutions, mismatches={mismatches}", elapsed, 10)
    assert not mismatches
    assert elapsed < 10


def _trial_pencil(rng, i):
    shape = BundleShape(3, 2, 5)
    kind = i % 3
    if kind == 0:
        return sample_pencil(rng, shape)
    if kind == 1:
        return sample_pencil(rng, shape, 0, 1)
    return decomposable_witness(rng, shape).pencil


def test_criterion_7_invariance():
    t0 = time.perf_counter()
    rng = make_rng(707)
    bad_gl, bad_v = [], []
    seen = set()
    for i in range(100):
        p = _trial_pencil(rng, i)
        d = intertwiner_dim(p).dim
        seen.add(d)
        q = p.transform(unimodular(rng, 2), unimodular(rng, 5))
        if intertwiner_dim(q).dim != d:
            bad_gl.append(i)
    for i in range(100):
        p = _trial_pencil(rng, i)
        d = intertwiner_dim(p).dim
        seen.add(d)
        q = p.change_variables(unimodular(rng, 3))
        if intertwiner_dim(q).dim != d:
            bad_v.append(i)
    elapsed = time.perf_counter() - t0
    ok = not bad_gl and not bad_v and elapsed < 20
    record(7, ok, f"GL(s)xGL(t) failures={bad_gl}, GL(V) failures={bad_v}, "
                  f"dims seen={sorted(seen)}", elapsed, 20)
    assert not bad_gl and not bad_v
    assert elapsed < 20


def test_criterion_8_field_agreement():
    t0 = time.perf_counter()
    rng = make_rng(808)
    shapes = [(N, s, t) for N in (3, 4, 5) for s in range(1, 8) for t in range(s + 1, 8)
              if s * s + t * t <= 50]
    bad = []
    dims = set()
    for i in range(50):
        N, s, t = shapes[i % len(shapes)]
        lo, hi = ((-9, 9), (-1, 1), (0, 1))[i % 3]
        rep = intertwiner_dim(sample_pencil(rng, BundleShape(N, s, t), lo, hi), "both")
        dims.add(rep.dim)
        if min(rep.per_prime_dims) != rep.rational_dim:
            bad.append((N, s, t, rep.per_prime_dims, rep.rational_dim))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    record(8, ok, f"50 instances over {len(shapes)} shapes, disagreements={bad}, "
                  f"dims seen={sorted(dims)}", elapsed, 30)
    assert not bad
    assert elapsed < 30


def test_criterion_9_sweep_determinism():
    outs = []
    for threads in ("1", "1", "4"):
        env = dict(os.environ, STEINERLAB_THREADS=threads)
        proc = subprocess.run([sys.executable, "-m", "steinerlab", "sweep", "--seed", "42"],
                              capture_output=True, env=env)
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    ok = outs[0] == outs[1] == outs[2] and len(outs[0]) > 0
    record(9, ok, f"3 runs (threads 1, 1, 4) byte-identical: {ok}, {len(outs[0])} bytes")
    assert ok
