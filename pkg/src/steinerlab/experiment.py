"""Seeded sweeps of intertwiner dimensions over ``(N, s, t)`` grids."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .endo import intertwiner_dim
from .exactla import DEFAULT_ENTRY_RANGE, make_rng
from .numtheory import BundleShape, classify
from .pencil import sample_pencil

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
THREADS_ENV = "STEINERLAB_THREADS"

SWEEP_FIELDS = (
    "N", "s", "t", "chi_end", "verdict", "is_bundle", "samples",
    "dims_histogram", "fraction_dim_1", "min_dim", "max_dim", "seed", "status",
)


def default_cells(Ns=(3, 4, 5), s_max: int = 4, t_max: int = 12,
                  s_min: int = 1, bundles_only: bool = True) -> list[tuple[int, int, int]]:
    cells = []
    for N in Ns:
        for s in range(s_min, s_max + 1):
            for t in range(s + 1, t_max + 1):
                if bundles_only and t - s < N - 1:
                    continue
                cells.append((N, s, t))
    return cells


@dataclass
class ExperimentConfig:
    cells: list[tuple[int, int, int]] = field(default_factory=default_cells)
    samples: int = 5
    seed: int = 0
    lo: int = DEFAULT_ENTRY_RANGE[0]
    hi: int = DEFAULT_ENTRY_RANGE[1]
    mode: str = "modular"
    primes: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("no cells to sweep")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.lo >= self.hi:
            raise ValueError("entry range needs lo < hi")


@dataclass
class SweepRow:
    N: int
    s: int
    t: int
    chi_end: int
    verdict: str
    is_bundle: bool
    samples: int
    dims_histogram: dict[int, int]
    fraction_dim_1: float | None
    min_dim: int | None
    max_dim: int | None
    seed: int
    status: str = "ok"

    def to_dict(self) -> dict:
        d = {name: getattr(self, name) for name in SWEEP_FIELDS}
        d["dims_histogram"] = {str(k): v for k, v in sorted(self.dims_histogram.items())}
        return d


def cell_seed(seed: int, N: int, s: int, t: int) -> int:
    """64-bit seed for one cell, independent of evaluation order."""
    digest = hashlib.sha256(f"{seed}:{N}:{s}:{t}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def run_cell(cfg: ExperimentConfig, N: int, s: int, t: int) -> SweepRow:
    shape = BundleShape(N, s, t)
    res = classify(shape)
    seed = cell_seed(cfg.seed, N, s, t)
    row = SweepRow(N, s, t, res.chi_end, res.verdict.value, shape.is_bundle,
                   cfg.samples, {}, None, None, None, seed)
    try:
        rng = make_rng(seed)
        dims = []
        for _ in range(cfg.samples):
            pencil = sample_pencil(rng, shape, cfg.lo, cfg.hi)
            dims.append(intertwiner_dim(pencil, cfg.mode, cfg.primes).dim)
    except Exception as exc:  # flag the row, keep sweeping
        log.warning("cell %s failed: %s", (N, s, t), exc)
        row.status = f"error: {exc}"
        return row
    row.dims_histogram = dict(Counter(dims))
    row.fraction_dim_1 = dims.count(1) / len(dims)
    row.min_dim, row.max_dim = min(dims), max(dims)
    return row


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def run_sweep(cfg: ExperimentConfig, threads: int | None = None) -> list[SweepRow]:
    """Evaluate every cell; rows come back in ``(N, s, t)`` order."""
    threads = thread_count() if threads is None else threads
    cells = sorted(cfg.cells)
    if threads == 1:
        return [run_cell(cfg, *c) for c in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: run_cell(cfg, *c), cells))


def _csv_value(name: str, value) -> str:
    if value is None:
        return ""
    if name == "dims_histogram":
        return ";".join(f"{k}:{v}" for k, v in sorted(value.items()))
    if name == "fraction_dim_1":
        return f"{value:.4f}"
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for row in rows:
        writer.writerow([_csv_value(n, getattr(row, n)) for n in SWEEP_FIELDS])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "rows": [r.to_dict() for r in rows]}
    return json.dumps(doc, indent=2) + "\n"
