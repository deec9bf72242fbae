"""Simplicity of generic Steiner bundles, checked by exact linear algebra."""

from .endo import (
    EndoCohomology,
    KernelReport,
    build_graded_system,
    build_system,
    chi_end_graded,
    endo_cohomology,
    graded_intertwiner_dim,
    intertwiner_dim,
)
from .exactla import BACKEND, DEFAULT_PRIMES, make_rng
from .numtheory import (
    BundleShape,
    ClassifyResult,
    PellSolution,
    Verdict,
    chi_end,
    classify,
    fib_pairs,
    fib_sequence,
    pell_solutions,
)
from .pencil import (
    GradedResolution,
    SteinerPencil,
    WitnessPencil,
    block_witness,
    decomposable_witness,
    sample_graded,
    sample_pencil,
)

__version__ = "0.1.0"
