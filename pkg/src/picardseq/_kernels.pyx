# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gauss-Jordan kernels over F_p.

Entries are int64; all arithmetic keeps values in [0, p) so products stay
well below 2**63 for p < 2**31.
"""


cdef inline long long _modinv(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _rref(long long[:, ::1] a, long long p, long long[::1] piv):
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, found
    cdef long long inv, f, tmp
    for i in range(rows):
        for j in range(cols):
            tmp = a[i, j] % p
            if tmp < 0:
                tmp += p
            a[i, j] = tmp
    for c in range(cols):
        if r == rows:
            break
        found = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                found = i
                break
        if found < 0:
            continue
        if found != r:
            for j in range(c, cols):
                tmp = a[r, j]
                a[r, j] = a[found, j]
                a[found, j] = tmp
        inv = _modinv(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, cols):
                a[i, j] = (a[i, j] + f * a[r, j]) % p
        piv[r] = c
        r += 1
    return r


def rref_inplace(long long[:, ::1] a, long long p):
    """Row-reduce ``a`` in place; return the list of pivot columns."""
    cdef Py_ssize_t n = min(a.shape[0], a.shape[1])
    cdef long long[::1] piv = _scratch(n if n > 0 else 1)
    cdef Py_ssize_t r = _rref(a, p, piv)
    return [int(piv[i]) for i in range(r)]


cdef long long[::1] _scratch(Py_ssize_t n):
    import numpy as np
    return np.zeros(n, dtype=np.int64)


def first_invertible(long long[:, :, ::1] basis, long long p, long long limit):
    """Scan coefficient vectors in lexicographic order (first index slowest,
    zero vector skipped) and return the first whose combination of the
    square ``basis`` matrices is invertible, or None.

    Raises OverflowError when more than ``limit`` candidates would be needed
    and none was found before that.
    """
    import numpy as np
    cdef Py_ssize_t k = basis.shape[0], d = basis.shape[1]
    cdef Py_ssize_t i, j, t, pos
    cdef long long seen = 0
    if basis.shape[2] != d:
        raise ValueError("basis matrices must be square")
    if k == 0:
        return None
    cdef long long[::1] coef = np.zeros(k, dtype=np.int64)
    cdef long long[:, ::1] work = np.zeros((d, d), dtype=np.int64)
    cdef long long[::1] piv = np.zeros(d if d > 0 else 1, dtype=np.int64)
    cdef long long acc
    while True:
        # odometer increment, last index fastest
        pos = k - 1
        while pos >= 0:
            coef[pos] += 1
            if coef[pos] < p:
                break
            coef[pos] = 0
            pos -= 1
        if pos < 0:
            return None
        seen += 1
        if seen > limit:
            raise OverflowError("candidate limit exceeded")
        for i in range(d):
            for j in range(d):
                acc = 0
                for t in range(k):
                    if coef[t] != 0:
                        acc += coef[t] * basis[t, i, j]
                work[i, j] = acc % p
        if _rref(work, p, piv) == d:
            return [int(coef[t]) for t in range(k)]
