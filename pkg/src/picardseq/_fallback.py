"""Pure-Python/numpy versions of the kernels in ``_kernels.pyx``.

Same signatures and the same enumeration order, so results are identical.
"""
from itertools import product

import numpy as np


def rref_inplace(a, p):
    rows, cols = a.shape
    a %= p
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a -= np.outer(col, a[r])
            a %= p
        pivots.append(c)
        r += 1
    return pivots


def first_invertible(basis, p, limit):
    k, d, d2 = basis.shape
    if d != d2:
        raise ValueError("basis matrices must be square")
    if k == 0:
        return None
    seen = 0
    for coef in product(range(p), repeat=k):
        if not any(coef):
            continue
        seen += 1
        if seen > limit:
            raise OverflowError("candidate limit exceeded")
        m = np.tensordot(np.asarray(coef, dtype=np.int64), basis, axes=1) % p
        if len(rref_inplace(m, p)) == d:
            return list(coef)
    return None
