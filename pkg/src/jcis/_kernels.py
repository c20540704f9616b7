"""Compiled inner loops of the all-pairs screening engine.

Every pair is reduced in the same fixed order regardless of how the pair
space is split, which is what makes screening results bit-identical across
worker counts.
"""
import numba
import numpy as np

# rows per block in the blocked triple-product sum
BLOCK = 128


@numba.njit(cache=True, nogil=True)
def triple_sum(a, b, c):
    """Sum of ``(a[i] * b[i]) * c[i]`` with a fixed blocked order.

    Four interleaved accumulators per block, blocks added sequentially.
    The order depends only on the length, never on the caller.
    """
    n = a.shape[0]
    total = 0.0
    start = 0
    while start < n:
        stop = min(start + BLOCK, n)
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        s3 = 0.0
        i = start
        while i + 4 <= stop:
            s0 += (a[i] * b[i]) * c[i]
            s1 += (a[i + 1] * b[i + 1]) * c[i + 1]
            s2 += (a[i + 2] * b[i + 2]) * c[i + 2]
            s3 += (a[i + 3] * b[i + 3]) * c[i + 3]
            i += 4
        while i < stop:
            s0 += (a[i] * b[i]) * c[i]
            i += 1
        total += (s0 + s1) + (s2 + s3)
        start = stop
    return total


@numba.njit(cache=True, nogil=True)
def normalized_score(s, sqrt_n, root1, root2, root_y):
    return sqrt_n * abs(s) / ((root1 * root2) * root_y)


@numba.njit(cache=True, nogil=True)
def score_rows(dev, dev_y, roots, root_y, sqrt_n, codes, row_start, row_stop,
               out_a, out_b, out_r):
    """Score every pair ``(a, b)``, ``a`` in ``[row_start, row_stop)``, ``b > a``.

    ``dev`` is the column-centred matrix (Fortran order).  Pairs whose group
    codes differ are skipped.  Returns the number of pairs written.
    """
    m = dev.shape[1]
    k = 0
    for a in range(row_start, row_stop):
        col_a = dev[:, a]
        code_a = codes[a]
        root_a = roots[a]
        for b in range(a + 1, m):
            if codes[b] != code_a:
                continue
            s = triple_sum(col_a, dev[:, b], dev_y)
            out_a[k] = a
            out_b[k] = b
            out_r[k] = normalized_score(s, sqrt_n, root_a, roots[b], root_y)
            k += 1
    return k
