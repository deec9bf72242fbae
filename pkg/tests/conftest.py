import random

import pytest

from steinerlab.exactla import make_rng


def unimodular(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> list[list[int]]:
    """Random integer matrix with determinant 1 (unit lower times unit upper)."""
    L = [[1 if i == j else (rng.randint(lo, hi) if j < i else 0) for j in range(n)] for i in range(n)]
    U = [[1 if i == j else (rng.randint(lo, hi) if j > i else 0) for j in range(n)] for i in range(n)]
    return [[sum(L[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


@pytest.fixture
def rng():
    return make_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
