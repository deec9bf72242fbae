"""Exact dense linear algebra over prime fields and the rationals.

The modular rank is computed by a compiled kernel when the ``_kernels``
extension is importable, otherwise by a pure-Python fallback with the
same contract.  Set ``STEINERLAB_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
import random
from array import array
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _kernels_py

if os.environ.get("STEINERLAB_BACKEND", "").lower() == "python":
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

#: Three largest primes below 2**62.
DEFAULT_PRIMES: tuple[int, ...] = (
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
)

DEFAULT_ENTRY_RANGE = (-9, 9)

#: Bareiss pivots larger than this many bits abort the rational path.
DEFAULT_MAX_BITS = 1 << 16

_WORD_LIMIT = 1 << 63


class ResourceLimitError(RuntimeError):
    """Fraction-free elimination exceeded the configured bit bound."""


def make_rng(seed: int) -> random.Random:
    """Deterministic stream for ``seed`` (stable across platforms)."""
    return random.Random(seed)


@dataclass(frozen=True)
class PrimeFieldMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        if any(not 0 <= x < self.p for x in self.entries):
            raise ValueError("entries must be reduced modulo p")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> PrimeFieldMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(x % p for x in row)
        return cls(p, len(rows), cols, tuple(flat))


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | Fraction]], cols: int | None = None) -> RationalMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(Fraction(x) for x in row)
        return cls(len(rows), cols, tuple(flat))


def _rank_flat(flat: Sequence[int], rows: int, cols: int, p: int) -> int:
    if rows == 0 or cols == 0:
        return 0
    if _compiled is not None and p < _WORD_LIMIT:
        return _compiled.rank_mod_p_buffer(array("Q", flat), rows, cols, p)
    return _kernels_py.rank_mod_p_buffer(flat, rows, cols, p)


def rank_mod_p(m: PrimeFieldMatrix) -> int:
    """Rank over ``F_p`` by Gaussian elimination."""
    return _rank_flat(m.entries, m.rows, m.cols, m.p)


def kernel_dim_mod_p(m: PrimeFieldMatrix) -> int:
    return m.cols - rank_mod_p(m)


def rank_int_mod_p(rows: Sequence[Sequence[int]], cols: int, p: int) -> int:
    """Rank over ``F_p`` of an integer matrix given as rows."""
    flat = [x % p for row in rows for x in row]
    return _rank_flat(flat, len(rows), cols, p)


def rank_int_rational(rows: Sequence[Sequence[int]], cols: int,
                      max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Rank over Q of an integer matrix by fraction-free (Bareiss) elimination.

    After ``k`` pivot steps every live entry is a ``(k+1)``-minor of the
    input, so the division by the previous pivot is exact.  Raises
    :class:`ResourceLimitError` when a pivot exceeds ``max_bits`` bits.
    """
    mat = [list(row) for row in rows]
    n = len(mat)
    r = 0
    prev = 1
    for c in range(cols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        pv = prow[c]
        if pv.bit_length() > max_bits:
            raise ResourceLimitError(
                f"pivot at column {c} has {pv.bit_length()} bits (limit {max_bits})"
            )
        for i in range(r + 1, n):
            row = mat[i]
            x = row[c]
            if x:
                row[c + 1:] = [(pv * a - x * b) // prev for a, b in zip(row[c + 1:], prow[c + 1:])]
            else:
                row[c + 1:] = [pv * a // prev for a in row[c + 1:]]
            row[c] = 0
        prev = pv
        r += 1
    return r


def kernel_dim_rational(m: RationalMatrix, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Exact kernel dimension over Q.  Rows are scaled to integers first."""
    int_rows = []
    for i in range(m.rows):
        row = m.entries[i * m.cols:(i + 1) * m.cols]
        den = lcm(*(x.denominator for x in row)) if row else 1
        int_rows.append([x.numerator * (den // x.denominator) for x in row])
    return m.cols - rank_int_rational(int_rows, m.cols, max_bits)


def random_int_matrix(rng: random.Random, rows: int, cols: int, lo: int, hi: int) -> list[list[int]]:
    """``rows x cols`` matrix with i.i.d. entries uniform on ``[lo, hi]``."""
    if lo >= hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
