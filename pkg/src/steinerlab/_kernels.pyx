# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gaussian elimination over F_p for word-sized primes p < 2**63."""

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    """
    #include <stdint.h>
    /* floor(f * 2^64 / p), so that f*x mod p needs one high multiply. */
    static inline uint64_t sl_shoup_pre(uint64_t f, uint64_t p) {
        return (uint64_t)((((unsigned __int128)f) << 64) / p);
    }
    static inline uint64_t sl_mulmod_shoup(uint64_t f, uint64_t fpre,
                                           uint64_t x, uint64_t p) {
        uint64_t q = (uint64_t)(((unsigned __int128)fpre * x) >> 64);
        uint64_t r = f * x - q * p;
        return r >= p ? r - p : r;
    }
    static inline uint64_t sl_mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)(((unsigned __int128)a * b) % p);
    }
    """
    uint64_t sl_shoup_pre(uint64_t f, uint64_t p) nogil
    uint64_t sl_mulmod_shoup(uint64_t f, uint64_t fpre, uint64_t x, uint64_t p) nogil
    uint64_t sl_mulmod(uint64_t a, uint64_t b, uint64_t p) nogil


cdef uint64_t _invmod(uint64_t a, uint64_t p) noexcept nogil:
    cdef int64_t t0 = 0, t1 = 1, q, tmp
    cdef int64_t r0 = <int64_t>p, r1 = <int64_t>a
    while r1 != 0:
        q = r0 // r1
        tmp = r0 - q * r1
        r0 = r1
        r1 = tmp
        tmp = t0 - q * t1
        t0 = t1
        t1 = tmp
    if t0 < 0:
        t0 += <int64_t>p
    return <uint64_t>t0


cdef Py_ssize_t _rank_inplace(uint64_t[::1] a, Py_ssize_t rows, Py_ssize_t cols,
                              uint64_t p) noexcept nogil:
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef uint64_t inv, f, fpre, x, y, tmp
    cdef uint64_t* base = &a[0]
    cdef uint64_t* prow
    cdef uint64_t* irow
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if base[i * cols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = base[piv * cols + j]
                base[piv * cols + j] = base[r * cols + j]
                base[r * cols + j] = tmp
        prow = base + r * cols
        inv = _invmod(prow[c], p)
        for i in range(r + 1, rows):
            irow = base + i * cols
            x = irow[c]
            if x == 0:
                continue
            f = sl_mulmod(x, inv, p)
            fpre = sl_shoup_pre(f, p)
            irow[c] = 0
            for j in range(c + 1, cols):
                y = prow[j]
                if y == 0:
                    continue
                y = sl_mulmod_shoup(f, fpre, y, p)
                x = irow[j]
                irow[j] = x - y if x >= y else x + (p - y)
        r += 1
    return r


def rank_mod_p_buffer(uint64_t[::1] buf, Py_ssize_t rows, Py_ssize_t cols, uint64_t p):
    """Rank of the row-major ``rows x cols`` matrix in ``buf`` (residues in
    ``[0, p)``), destroying ``buf``.  Releases the GIL while eliminating."""
    if p < 2 or p >= (<uint64_t>1) << 63:
        raise ValueError("prime must satisfy 2 <= p < 2**63")
    if buf.shape[0] != rows * cols:
        raise ValueError("buffer size does not match rows * cols")
    if rows == 0 or cols == 0:
        return 0
    cdef Py_ssize_t rank
    with nogil:
        rank = _rank_inplace(buf, rows, cols, p)
    return rank
