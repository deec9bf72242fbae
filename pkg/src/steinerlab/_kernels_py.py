"""Pure-Python Gaussian elimination over F_p, used when the compiled
kernel is unavailable.  Same contract as ``_kernels.rank_mod_p_buffer``."""

from __future__ import annotations


def rank_mod_p_buffer(buf, rows: int, cols: int, p: int) -> int:
    if p < 2:
        raise ValueError("prime must be >= 2")
    if len(buf) != rows * cols:
        raise ValueError("buffer size does not match rows * cols")
    mat = [list(buf[i * cols:(i + 1) * cols]) for i in range(rows)]
    return rank_mod_p_rows(mat, cols, p)


def rank_mod_p_rows(mat: list[list[int]], cols: int, p: int) -> int:
    """Rank of ``mat`` (list of reduced rows), eliminating in place."""
    rows = len(mat)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        inv = pow(prow[c], -1, p)
        tail = prow[c + 1:]
        for i in range(r + 1, rows):
            row = mat[i]
            x = row[c]
            if not x:
                continue
            f = x * inv % p
            row[c + 1:] = [(a - f * b) % p for a, b in zip(row[c + 1:], tail)]
            row[c] = 0
        r += 1
    return r
