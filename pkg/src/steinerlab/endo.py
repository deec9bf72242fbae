"""Endomorphisms of Steiner bundles as intertwiners of pencils.

For a pencil with slices ``M_i`` (``t x s``) the pairs ``(A, B)`` with
``B M_i = M_i A`` for every ``i`` form a linear space whose dimension is
``h^0(End E)`` once the stacked slices have full column rank.  The
linear system has ``s^2 + t^2`` unknowns (``A`` row-major, then ``B``
row-major) and ``N t s`` equations (grouped by slice, then by entry of
``B M_i - M_i A`` in row-major order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .exactla import (
    DEFAULT_MAX_BITS,
    DEFAULT_PRIMES,
    rank_int_mod_p,
    rank_int_rational,
)
from .numtheory import chi_end
from .pencil import GradedResolution, SteinerPencil, monomials

MODES = ("modular", "rational", "both")


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class IntertwinerSystem:
    unknowns: int
    rows: list[list[int]] = field(repr=False)

    @property
    def equations(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class KernelReport:
    dim: int
    mode: str
    primes: tuple[int, ...]
    per_prime_dims: tuple[int, ...]
    rational_dim: int | None
    agreement: bool
    equations: int
    unknowns: int

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "mode": self.mode,
            "primes": list(self.primes),
            "per_prime_dims": list(self.per_prime_dims),
            "rational_dim": self.rational_dim,
            "agreement": self.agreement,
            "equations": self.equations,
            "unknowns": self.unknowns,
        }


@dataclass(frozen=True)
class EndoCohomology:
    """``h^0``, ``h^1`` and ``chi`` of ``End E``; higher groups vanish for
    Steiner bundles.  ``conditional`` marks mixed twists, where that
    vanishing is assumed rather than known."""

    h0: int
    h1: int
    chi: int
    conditional: bool = False


def build_system(pencil: SteinerPencil) -> IntertwinerSystem:
    s, t = pencil.shape.s, pencil.shape.t
    if s < 1:
        raise PreconditionError("intertwiner system needs s >= 1")
    u = s * s + t * t
    b0 = s * s
    rows = []
    for m in pencil.slices:
        for r in range(t):
            mr = m[r]
            for c in range(s):
                eq = [0] * u
                # (B M)[r, c] = sum_k B[r, k] M[k, c]
                for k in range(t):
                    eq[b0 + r * t + k] += m[k][c]
                # (M A)[r, c] = sum_k M[r, k] A[k, c]
                for k in range(s):
                    eq[k * s + c] -= mr[k]
                rows.append(eq)
    return IntertwinerSystem(u, rows)


def build_graded_system(res: GradedResolution) -> IntertwinerSystem:
    """Linear system for pairs ``(phi_A, phi_B)`` with ``phi_B M = M phi_A``.

    ``phi_B`` is a constant ``t x t`` matrix; entry ``(j, k)`` of ``phi_A``
    is a form of degree ``d_k - d_j`` (absent when negative).  Equations
    equate, for each column ``k``, each degree-``d_k`` monomial and each
    row of ``W``.
    """
    N, t, d = res.N, res.t, res.twists
    s = res.s
    a_index: dict[tuple[int, int], tuple[int, list]] = {}
    u = 0
    for j in range(s):
        for k in range(s):
            if d[k] >= d[j]:
                mons = monomials(N, d[k] - d[j])
                a_index[j, k] = (u, mons)
                u += len(mons)
    b0 = u
    u += t * t

    mono_pos = [{e: i for i, e in enumerate(monomials(N, dk))} for dk in d]
    eq_base = []
    e = 0
    for k in range(s):
        eq_base.append(e)
        e += len(mono_pos[k]) * t
    rows = [[0] * u for _ in range(e)]

    for k in range(s):
        block = res.coeffs[k]
        for mu in range(len(block)):
            for r in range(t):
                eq = rows[eq_base[k] + mu * t + r]
                for q in range(t):
                    eq[b0 + r * t + q] += block[mu][q]
        for j in range(s):
            if (j, k) not in a_index:
                continue
            start, lam_mons = a_index[j, k]
            for nu_i, nu in enumerate(monomials(N, d[j])):
                vec = res.coeffs[j][nu_i]
                for lam_i, lam in enumerate(lam_mons):
                    mu = mono_pos[k][tuple(x + y for x, y in zip(nu, lam))]
                    base = eq_base[k] + mu * t
                    for r in range(t):
                        if vec[r]:
                            rows[base + r][start + lam_i] -= vec[r]
    return IntertwinerSystem(u, rows)


def kernel_report(system: IntertwinerSystem, mode: str = "modular",
                  primes: Sequence[int] | None = None,
                  max_bits: int = DEFAULT_MAX_BITS) -> KernelReport:
    """Kernel dimension of ``system`` over the requested fields.

    Modulo ``p`` the kernel of an integer system can only grow, so the
    modular answer is the minimum over primes.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    primes = tuple(DEFAULT_PRIMES if primes is None else primes)
    u = system.unknowns
    per_prime: tuple[int, ...] = ()
    if mode in ("modular", "both"):
        if not primes:
            raise ValueError("modular mode needs at least one prime")
        per_prime = tuple(u - rank_int_mod_p(system.rows, u, p) for p in primes)
    else:
        primes = ()
    rational = None
    if mode in ("rational", "both"):
        rational = u - rank_int_rational(system.rows, u, max_bits)
    if rational is not None:
        dim = rational
        agreement = all(x == rational for x in per_prime)
    else:
        dim = min(per_prime)
        agreement = len(set(per_prime)) == 1
    return KernelReport(dim, mode, primes, per_prime, rational, agreement,
                        system.equations, u)


def intertwiner_dim(pencil: SteinerPencil, mode: str = "modular",
                    primes: Sequence[int] | None = None,
                    max_bits: int = DEFAULT_MAX_BITS) -> KernelReport:
    if pencil.shape.s < 1:
        raise PreconditionError("intertwiner_dim needs s >= 1")
    if not pencil.full_column_rank():
        raise PreconditionError("stacked slices do not have full column rank")
    return kernel_report(build_system(pencil), mode, primes, max_bits)


def graded_intertwiner_dim(res: GradedResolution, mode: str = "modular",
                           primes: Sequence[int] | None = None,
                           max_bits: int = DEFAULT_MAX_BITS) -> KernelReport:
    point = list(range(2, res.N + 2))
    if not (res.injective_at_point(point) or res.injective_at_point(point[::-1])):
        raise PreconditionError("resolution map is not injective at the test points")
    return kernel_report(build_graded_system(res), mode, primes, max_bits)


def _hilb(N: int, d: int) -> int:
    # h^0(O(d)) on P^(N-1); zero on the range -N < d < 0 where h^i all vanish.
    if d >= 0:
        return comb(N - 1 + d, N - 1)
    if d > -N:
        return 0
    raise ValueError(f"twist O({d}) is outside the supported range on P^{N - 1}")


def chi_end_graded(N: int, twists: Sequence[int], t: int) -> int:
    """``chi(End F) = t chi(F) - sum_j chi(F(d_j))`` with
    ``chi(F(d)) = t h(d) - sum_j h(d - d_j)``."""
    if not twists or any(d < 1 for d in twists):
        raise ValueError(f"invalid twists {list(twists)}")

    def chi_twist(e: int) -> int:
        return t * _hilb(N, e) - sum(_hilb(N, e - dj) for dj in twists)

    return t * chi_twist(0) - sum(chi_twist(dj) for dj in twists)


def endo_cohomology(obj: SteinerPencil | GradedResolution, mode: str = "modular",
                    primes: Sequence[int] | None = None) -> EndoCohomology:
    if isinstance(obj, SteinerPencil):
        h0 = intertwiner_dim(obj, mode, primes).dim
        chi = chi_end(obj.shape)
        return EndoCohomology(h0, h0 - chi, chi)
    h0 = graded_intertwiner_dim(obj, mode, primes).dim
    chi = chi_end_graded(obj.N, obj.twists, obj.t)
    return EndoCohomology(h0, h0 - chi, chi, conditional=not obj.is_linear())
