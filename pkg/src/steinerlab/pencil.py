"""Steiner pencils, graded resolutions, witnesses and their text format.

A pencil is stored as ``N`` integer slices ``M_1 .. M_N``, each ``t x s``
(rows index ``W``, columns index ``I``), and represents ``M = sum x_i M_i``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .exactla import DEFAULT_ENTRY_RANGE, DEFAULT_PRIMES, random_int_matrix, rank_int_mod_p
from .numtheory import BundleShape

Matrix = tuple[tuple[int, ...], ...]

SAMPLE_RETRIES = 16


class SamplingError(RuntimeError):
    pass


class PencilFormatError(ValueError):
    """Malformed pencil file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _freeze(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


@dataclass(frozen=True)
class SteinerPencil:
    shape: BundleShape
    slices: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        N, s, t = self.shape.N, self.shape.s, self.shape.t
        object.__setattr__(self, "slices", tuple(_freeze(m) for m in self.slices))
        if len(self.slices) != N:
            raise ValueError(f"expected {N} slices, got {len(self.slices)}")
        for i, m in enumerate(self.slices):
            if len(m) != t or any(len(row) != s for row in m):
                raise ValueError(f"slice {i} is not {t}x{s}")

    @classmethod
    def from_slices(cls, slices: Sequence[Sequence[Sequence[int]]]) -> SteinerPencil:
        N = len(slices)
        t = len(slices[0])
        s = len(slices[0][0]) if t else 0
        return cls(BundleShape(N, s, t), tuple(slices))

    def stacked(self) -> list[tuple[int, ...]]:
        """The ``(N t) x s`` matrix ``[M_1; ...; M_N]``."""
        return [row for m in self.slices for row in m]

    def full_column_rank(self, primes: Sequence[int] = DEFAULT_PRIMES) -> bool:
        """Whether the stacked matrix has rank ``s`` (checked modulo primes;
        rank over Q is at least the rank modulo any prime).
        """
        s = self.shape.s
        if s == 0:
            return True
        return any(rank_int_mod_p(self.stacked(), s, p) == s for p in primes)

    def transform(self, C: Sequence[Sequence[int]], D: Sequence[Sequence[int]]) -> SteinerPencil:
        """Pencil with slices ``D M_i C`` (``C`` is ``s x s``, ``D`` is ``t x t``)."""
        return SteinerPencil(self.shape, tuple(_matmul(_matmul(D, m), C) for m in self.slices))

    def change_variables(self, g: Sequence[Sequence[int]]) -> SteinerPencil:
        """Pencil with slices ``sum_j g[i][j] M_j``."""
        t, s = self.shape.t, self.shape.s
        out = []
        for gi in g:
            out.append(tuple(
                tuple(sum(gij * m[r][c] for gij, m in zip(gi, self.slices)) for c in range(s))
                for r in range(t)
            ))
        return SteinerPencil(self.shape, tuple(out))


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def monomials(N: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree ``d`` in ``N`` variables, lexicographically
    descending (``x_1^d`` first)."""
    out = []
    for combo in combinations_with_replacement(range(N), d):
        e = [0] * N
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomial_count(N: int, d: int) -> int:
    return comb(N - 1 + d, N - 1)


@dataclass(frozen=True)
class GradedResolution:
    """``0 -> O(-d_1) + ... + O(-d_s) -> O^t -> F -> 0``.

    ``coeffs[j][mu]`` is the ``t``-vector of coefficients of the ``mu``-th
    degree-``d_j`` monomial (order of :func:`monomials`) in column ``j``.
    """

    N: int
    t: int
    twists: tuple[int, ...]
    coeffs: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "twists", tuple(int(d) for d in self.twists))
        object.__setattr__(self, "coeffs", tuple(_freeze(c) for c in self.coeffs))
        if self.N < 1 or self.t < 1:
            raise ValueError("need N >= 1 and t >= 1")
        if not self.twists:
            raise ValueError("twists must be nonempty")
        if any(d < 1 for d in self.twists):
            raise ValueError(f"twists must be >= 1, got {list(self.twists)}")
        if list(self.twists) != sorted(self.twists, reverse=True):
            raise ValueError("twists must be non-increasing")
        if len(self.coeffs) != len(self.twists):
            raise ValueError("one coefficient block per twist required")
        for j, (d, block) in enumerate(zip(self.twists, self.coeffs)):
            if len(block) != monomial_count(self.N, d):
                raise ValueError(f"column {j}: expected {monomial_count(self.N, d)} coefficient vectors")
            if any(len(v) != self.t for v in block):
                raise ValueError(f"column {j}: coefficient vectors must have length {self.t}")

    @property
    def s(self) -> int:
        return len(self.twists)

    def is_linear(self) -> bool:
        return all(d == 1 for d in self.twists)

    def to_pencil(self) -> SteinerPencil:
        if not self.is_linear():
            raise ValueError("only all-ones twists convert to a Steiner pencil")
        s, t = self.s, self.t
        # monomials(N, 1) lists x_1 .. x_N in order.
        slices = [[[self.coeffs[j][i][r] for j in range(s)] for r in range(t)] for i in range(self.N)]
        return SteinerPencil(BundleShape(self.N, s, t), tuple(slices))

    @classmethod
    def from_pencil(cls, pencil: SteinerPencil) -> GradedResolution:
        N, s, t = pencil.shape.N, pencil.shape.s, pencil.shape.t
        coeffs = [[[pencil.slices[i][r][j] for r in range(t)] for i in range(N)] for j in range(s)]
        return cls(N, t, (1,) * s, tuple(coeffs))

    def injective_at_point(self, point: Sequence[int], p: int = DEFAULT_PRIMES[0]) -> bool:
        """Whether ``M(point)`` has full column rank mod ``p`` (a sufficient
        condition for the sheaf map to be injective)."""
        cols = []
        for d, block in zip(self.twists, self.coeffs):
            vals = [_mono_eval(e, point, p) for e in monomials(self.N, d)]
            cols.append([sum(v * c[r] for v, c in zip(vals, block)) % p for r in range(self.t)])
        rows = [list(r) for r in zip(*cols)]
        return rank_int_mod_p(rows, self.s, p) == self.s


def _mono_eval(e: tuple[int, ...], point: Sequence[int], p: int) -> int:
    v = 1
    for x, k in zip(point, e):
        v = v * pow(x, k, p) % p
    return v


def sample_pencil(rng: random.Random, shape: BundleShape,
                  lo: int = DEFAULT_ENTRY_RANGE[0], hi: int = DEFAULT_ENTRY_RANGE[1],
                  retries: int = SAMPLE_RETRIES) -> SteinerPencil:
    """Random pencil with i.i.d. slice entries in ``[lo, hi]``, resampled
    until the stacked matrix has full column rank."""
    if shape.s < 1:
        raise ValueError("sample_pencil needs s >= 1")
    for _ in range(retries):
        slices = tuple(random_int_matrix(rng, shape.t, shape.s, lo, hi) for _ in range(shape.N))
        pencil = SteinerPencil(shape, slices)
        if pencil.full_column_rank():
            return pencil
    raise SamplingError(f"no full-column-rank pencil at {shape} after {retries} tries")


def sample_graded(rng: random.Random, N: int, twists: Sequence[int], t: int,
                  lo: int = DEFAULT_ENTRY_RANGE[0], hi: int = DEFAULT_ENTRY_RANGE[1]) -> GradedResolution:
    twists = tuple(twists)
    if not twists or any(d < 1 for d in twists):
        raise ValueError(f"invalid twists {list(twists)}")
    if t < 1:
        raise ValueError("t must be >= 1")
    twists = tuple(sorted(twists, reverse=True))
    coeffs = tuple(random_int_matrix(rng, monomial_count(N, d), t, lo, hi) for d in twists)
    return GradedResolution(N, t, twists, coeffs)


class WitnessKind(str, enum.Enum):
    DIRECT_SUM_WITH_TRIVIAL = "DirectSumWithTrivial"
    BLOCK_DIAGONAL = "BlockDiagonal"


@dataclass(frozen=True)
class WitnessPencil:
    pencil: SteinerPencil
    kind: WitnessKind
    predicted_extra_dim: int
    blocks: tuple[int, int, int, int] | None = field(default=None)


def decomposable_witness(rng: random.Random, shape: BundleShape,
                         lo: int = DEFAULT_ENTRY_RANGE[0], hi: int = DEFAULT_ENTRY_RANGE[1]) -> WitnessPencil:
    """Pencil of ``E' + O``: a generic ``(s, t-1)`` pencil with a zero row appended.

    Every ``(I_s, diag(I_{t-1}, c))`` is an intertwiner, so the dimension is
    at least 2.
    """
    if shape.t - shape.s <= shape.N - 1:
        raise ValueError(f"decomposable witness needs t - s > N - 1, got {shape}")
    inner = sample_pencil(rng, BundleShape(shape.N, shape.s, shape.t - 1), lo, hi)
    zero = (0,) * shape.s
    slices = tuple(m + (zero,) for m in inner.slices)
    return WitnessPencil(SteinerPencil(shape, slices), WitnessKind.DIRECT_SUM_WITH_TRIVIAL, 2)


def block_witness(rng: random.Random, N: int, n1: int, n2: int, m1: int, m2: int,
                  lo: int = DEFAULT_ENTRY_RANGE[0], hi: int = DEFAULT_ENTRY_RANGE[1]) -> WitnessPencil:
    """Block-diagonal pencil with ``s = n1 + n2`` columns and ``t = m1 + m2`` rows.

    Block ``k`` is a random ``m_k x n_k`` pencil; scaling each block
    independently gives a 2-parameter family of intertwiners.
    """
    if min(n1, n2, m1, m2) < 1:
        raise ValueError("all block sizes must be >= 1")
    s, t = n1 + n2, m1 + m2
    shape = BundleShape(N, s, t)
    for _ in range(SAMPLE_RETRIES):
        slices = []
        for _ in range(N):
            top = random_int_matrix(rng, m1, n1, lo, hi)
            bot = random_int_matrix(rng, m2, n2, lo, hi)
            slices.append([row + [0] * n2 for row in top] + [[0] * n1 + row for row in bot])
        pencil = SteinerPencil(shape, tuple(slices))
        if pencil.full_column_rank():
            return WitnessPencil(pencil, WitnessKind.BLOCK_DIAGONAL, 2, (n1, n2, m1, m2))
    raise SamplingError(f"no full-column-rank block pencil at {shape}")


# -- text format -------------------------------------------------------------

def dumps(obj: SteinerPencil | GradedResolution) -> str:
    """Canonical text form (see README for the grammar)."""
    lines = []
    if isinstance(obj, SteinerPencil):
        N, s, t = obj.shape.N, obj.shape.s, obj.shape.t
        lines.append(f"steiner {N} {s} {t}")
        for m in obj.slices:
            lines.append("")
            lines.extend(" ".join(map(str, row)) for row in m)
    elif isinstance(obj, GradedResolution):
        lines.append(f"graded {obj.N} {obj.t}")
        for d, block in zip(obj.twists, obj.coeffs):
            lines.append("")
            lines.append(f"twist {d}")
            lines.extend(" ".join(map(str, v)) for v in block)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def _data_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _ints(tokens: list[str], lineno: int, width: int, what: str) -> tuple[int, ...]:
    if len(tokens) != width:
        raise PencilFormatError(f"{what}: expected {width} integers, got {len(tokens)}", lineno)
    try:
        return tuple(int(x) for x in tokens)
    except ValueError:
        raise PencilFormatError(f"{what}: non-integer entry", lineno) from None


def loads(text: str) -> SteinerPencil | GradedResolution:
    lines = _data_lines(text)
    if not lines:
        raise PencilFormatError("empty input")
    lineno, head = lines[0]
    kind = head[0]
    if kind == "steiner":
        N, s, t = _ints(head[1:], lineno, 3, "header 'steiner N s t'")
        try:
            shape = BundleShape(N, s, t)
        except ValueError as exc:
            raise PencilFormatError(str(exc), lineno) from None
        body = lines[1:]
        slices = []
        for i in range(N):
            chunk = body[i * t:(i + 1) * t]
            if len(chunk) < t:
                last = body[-1][0] if body else lineno
                raise PencilFormatError(f"slice {i}: expected {t} rows, got {len(chunk)}", last)
            slices.append(tuple(_ints(tok, ln, s, f"slice {i}") for ln, tok in chunk))
        if len(body) > N * t:
            raise PencilFormatError(f"trailing data after {N} slices", body[N * t][0])
        return SteinerPencil(shape, tuple(slices))
    if kind == "graded":
        N, t = _ints(head[1:], lineno, 2, "header 'graded N t'")
        twists, coeffs = [], []
        body = lines[1:]
        pos = 0
        while pos < len(body):
            ln, tok = body[pos]
            if tok[0] != "twist":
                raise PencilFormatError(f"expected 'twist d', got {tok[0]!r}", ln)
            (d,) = _ints(tok[1:], ln, 1, "twist line")
            if d < 1:
                raise PencilFormatError(f"twist must be >= 1, got {d}", ln)
            j = len(twists)
            count = monomial_count(N, d)
            chunk = body[pos + 1:pos + 1 + count]
            if len(chunk) < count or any(tk[0] == "twist" for _, tk in chunk):
                raise PencilFormatError(f"column {j}: expected {count} coefficient lines", ln)
            twists.append(d)
            coeffs.append(tuple(_ints(tk, l2, t, f"column {j}") for l2, tk in chunk))
            pos += 1 + count
        try:
            return GradedResolution(N, t, tuple(twists), tuple(coeffs))
        except ValueError as exc:
            raise PencilFormatError(str(exc), lineno) from None
    raise PencilFormatError(f"unknown header {kind!r}", lineno)


def load(path) -> SteinerPencil | GradedResolution:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(obj: SteinerPencil | GradedResolution, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
