"""Exact linear algebra over prime fields F_p.

Matrices are plain ``numpy`` int64 arrays with entries in ``[0, p)``; the
characteristic travels as an explicit ``p`` argument.  Subspaces are kept in
reduced row-echelon form, so equal subspaces have equal ``key``.
"""
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch

if os.environ.get("PICARDSEQ_PURE"):
    from . import _fallback as _backend
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _fallback as _backend
        BACKEND = "python"

ISO_SCAN_LIMIT = 2_000_000

_PRIMES = [q for q in range(2, 98) if all(q % d for d in range(2, int(q ** 0.5) + 1))]


def check_prime(p):
    if p not in _PRIMES:
        raise ValueError(f"characteristic must be a prime in [2, 97], got {p}")


def asmat(a, p):
    """Copy ``a`` into a C-contiguous int64 array reduced mod p."""
    m = np.array(a, dtype=np.int64, copy=True, order="C")
    m %= p
    return m


def rref(m, p):
    """Return ``(R, pivots)`` with R the reduced row-echelon form of m."""
    a = asmat(m, p)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    if a.size == 0:
        return a, []
    pivots = _backend.rref_inplace(a, p)
    return a, list(pivots)


def rank(m, p):
    return len(rref(m, p)[1])


def is_invertible(m, p):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def inverse(m, p):
    m = np.asarray(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise DimensionMismatch(f"cannot invert a {m.shape} matrix")
    aug = np.hstack([asmat(m, p), np.eye(n, dtype=np.int64)])
    red, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise np.linalg.LinAlgError("singular matrix over F_%d" % p)
    return red[:, n:].copy()


def kernel(m, p):
    """Null space {v : m v = 0} as a Subspace of F_p^cols."""
    m = np.asarray(m)
    rows, cols = m.shape
    red, piv = rref(m, p)
    free = [j for j in range(cols) if j not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, c in enumerate(piv):
            basis[t, c] = -red[i, f] % p
    return Subspace.span(basis, p, cols)


def image(m, p):
    """Column space of m as a Subspace of F_p^rows."""
    m = np.asarray(m)
    return Subspace.span(m.T, p, m.shape[0])


def solve(m, b, p):
    """Some x with m x = b, or None.  ``b`` may be a vector or a matrix of
    right-hand sides (then every column must be solvable)."""
    m = np.asarray(m)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if m.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"solve: {m.shape} vs rhs {b.shape}")
    n = m.shape[1]
    red, piv = rref(np.hstack([asmat(m, p), asmat(b, p)]), p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, n:]
    return x[:, 0] if vec else x


def first_invertible(mats, p, limit=ISO_SCAN_LIMIT):
    """Coefficients of the first invertible linear combination of ``mats``
    (lexicographic scan, first coefficient slowest), or None."""
    if len(mats) == 0:
        return None
    basis = asmat(np.stack(mats), p)
    return _backend.first_invertible(basis, p, limit)


@dataclass(frozen=True)
class Subspace:
    """Row-reduced basis of a subspace of F_p^ambient_dim."""

    p: int
    ambient_dim: int
    basis: tuple

    @classmethod
    def span(cls, vectors, p, ambient_dim):
        v = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        red, piv = rref(v, p)
        return cls(p, ambient_dim, tuple(tuple(int(x) for x in row) for row in red[: len(piv)]))

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, ())

    @classmethod
    def full(cls, p, n):
        return cls(p, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dim(self):
        return len(self.basis)

    @cached_property
    def matrix(self):
        m = np.array(self.basis, dtype=np.int64).reshape(self.dim, self.ambient_dim)
        m.flags.writeable = False
        return m

    @cached_property
    def pivots(self):
        return [row.index(next(x for x in row if x)) for row in self.basis]

    @cached_property
    def key(self):
        return bytes([self.p, self.ambient_dim]) + self.matrix.astype(np.uint8).tobytes()

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def __add__(self, other):
        self._check(other)
        return Subspace.span(np.vstack([self.matrix, other.matrix]), self.p, self.ambient_dim)

    def intersect(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        # a U = b W  <=>  (a, b) in ker [U^T | -W^T]
        sys_ = np.hstack([self.matrix.T, (-other.matrix.T) % self.p])
        ker = kernel(sys_, self.p)
        vecs = ker.matrix[:, : self.dim] @ self.matrix
        return Subspace.span(vecs, self.p, self.ambient_dim)

    def coords(self, v):
        """Coordinates of v in the RREF basis; None if v is not in the span."""
        v = np.asarray(v, dtype=np.int64) % self.p
        c = v[..., self.pivots] if self.dim else v[..., :0]
        if np.any((c @ self.matrix) % self.p != v):
            return None
        return c

    def contains(self, v):
        return self.coords(v) is not None

    def __le__(self, other):
        self._check(other)
        return all(other.contains(row) for row in self.matrix)

    def __contains__(self, v):
        return self.contains(v)


def quotient_with_section(sub):
    """Quotient F^n / sub.

    Returns ``(qdim, proj, section)`` where proj is (qdim x n) with kernel
    exactly ``sub`` and section is (n x qdim) with proj @ section = I.
    Quotient coordinates are the non-pivot coordinates of ``sub``.
    """
    n, p = sub.ambient_dim, sub.p
    piv = sub.pivots
    free = [j for j in range(n) if j not in set(piv)]
    q = len(free)
    proj = np.zeros((q, n), dtype=np.int64)
    section = np.zeros((n, q), dtype=np.int64)
    col_of = {f: t for t, f in enumerate(free)}
    for t, f in enumerate(free):
        proj[t, f] = 1
        section[f, t] = 1
    # v - sum v[piv_i] b_i has zero pivot entries; read off the free ones
    for i, c in enumerate(piv):
        row = sub.matrix[i]
        for f in free:
            if row[f]:
                proj[col_of[f], c] = (proj[col_of[f], c] - row[f]) % p
    return q, proj, section
