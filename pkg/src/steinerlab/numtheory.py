"""Integer arithmetic of Steiner bundles.

Everything here is exact (Python integers are unbounded), so the
generalized Fibonacci numbers can be pushed to any index without
overflow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class BundleShape:
    """The triple ``(N, s, t)`` of a resolution ``0 -> O(-1)^s -> O^t -> E -> 0``
    on ``P^(N-1)``."""

    N: int
    s: int
    t: int

    def __post_init__(self) -> None:
        if self.N < 3:
            raise ValueError(f"N must be >= 3, got {self.N}")
        if self.s < 0:
            raise ValueError(f"s must be >= 0, got {self.s}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")

    @property
    def rank(self) -> int:
        return self.t - self.s

    @property
    def is_bundle(self) -> bool:
        """True when the cokernel is locally free, i.e. ``t - s >= N - 1``."""
        return self.t - self.s >= self.N - 1

    @property
    def chi_end(self) -> int:
        return chi_end(self)


class Verdict(str, enum.Enum):
    SIMPLE_GENERIC = "SimpleGeneric"
    EXCEPTIONAL = "Exceptional"
    NON_SIMPLE_ALL = "NonSimpleAll"


@dataclass(frozen=True)
class ClassifyResult:
    shape: BundleShape
    verdict: Verdict
    chi_end: int
    fib_index: int | None = None

    @property
    def is_bundle(self) -> bool:
        return self.shape.is_bundle

    def to_dict(self) -> dict:
        return {
            "N": self.shape.N,
            "s": self.shape.s,
            "t": self.shape.t,
            "verdict": self.verdict.value,
            "chi_end": self.chi_end,
            "fib_index": self.fib_index,
            "is_bundle": self.is_bundle,
        }

    def __str__(self) -> str:
        label = self.verdict.value
        if self.verdict is Verdict.EXCEPTIONAL:
            label += f" k={self.fib_index}"
        return f"{label} chi={self.chi_end} is_bundle={str(self.is_bundle).lower()}"


class PellSolution(NamedTuple):
    """A solution of ``r^2 - (N^2-4) s^2 = 4`` with ``t = (N s + r) / 2``."""

    r: int
    s: int
    t: int


def chi_end(shape: BundleShape) -> int:
    """Euler characteristic of ``End E``: ``s^2 - N s t + t^2``."""
    N, s, t = shape.N, shape.s, shape.t
    return s * s - N * s * t + t * t


def fib_sequence(N: int, k_max: int) -> list[int]:
    """Return ``a_0 .. a_{k_max}`` with ``a_0 = 0, a_1 = 1, a_{k+1} = N a_k - a_{k-1}``."""
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    seq = [0, 1]
    while len(seq) <= k_max:
        seq.append(N * seq[-1] - seq[-2])
    return seq[: k_max + 1]


def _fib_pair_iter(N: int):
    a, b = 0, 1
    while True:
        yield a, b
        a, b = b, N * b - a


def pell_solutions(N: int, s_bound: int) -> list[PellSolution]:
    """All non-negative solutions of ``r^2 - (N^2-4) s^2 = 4`` with ``s <= s_bound``.

    Generated by the recurrence from ``(r, s) = (2, 0)``::

        r' = ((N^2-4) s + N r) / 2
        s' = (N s + r) / 2

    Both numerators are always even, which is asserted at every step.
    """
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    if s_bound < 0:
        return []
    D = N * N - 4
    out: list[PellSolution] = []
    r, s = 2, 0
    while s <= s_bound:
        num_t = N * s + r
        assert num_t % 2 == 0
        assert r * r - D * s * s == 4
        out.append(PellSolution(r, s, num_t // 2))
        num_r = D * s + N * r
        assert num_r % 2 == 0
        r, s = num_r // 2, num_t // 2
    return out


def fib_pairs(N: int, t_bound: int) -> list[tuple[int, int]]:
    """Consecutive pairs ``(a_k, a_{k+1})`` with ``a_{k+1} <= t_bound``."""
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    out = []
    for a, b in _fib_pair_iter(N):
        if b > t_bound:
            break
        out.append((a, b))
    return out


def fib_index(N: int, s: int, t: int) -> int | None:
    """Index ``k`` with ``(s, t) == (a_k, a_{k+1})``, or ``None``."""
    for k, (a, b) in enumerate(_fib_pair_iter(N)):
        if (a, b) == (s, t):
            return k
        if b > t:
            return None


def classify(shape: BundleShape) -> ClassifyResult:
    """Classify a shape by the sign of ``chi(End E) - 1``.

    ``chi <= 0`` means the generic bundle is simple, ``chi == 1`` happens
    exactly on consecutive Fibonacci pairs (exceptional bundles) and
    ``chi >= 2`` forces non-trivial endomorphisms for every pencil.
    Shapes with ``t - s < N - 1`` still get an arithmetic verdict;
    check ``is_bundle`` on the result.
    """
    if shape.t <= shape.s:
        raise ValueError(f"classify needs t > s, got s={shape.s}, t={shape.t}")
    chi = chi_end(shape)
    if chi <= 0:
        return ClassifyResult(shape, Verdict.SIMPLE_GENERIC, chi)
    if chi == 1:
        k = fib_index(shape.N, shape.s, shape.t)
        if k is None:
            raise AssertionError(
                f"chi(End E) = 1 at {shape} but (s, t) is not a Fibonacci pair"
            )
        return ClassifyResult(shape, Verdict.EXCEPTIONAL, chi, k)
    return ClassifyResult(shape, Verdict.NON_SIMPLE_ALL, chi)
