"""Bimodules over subrings of a structure-constant algebra.

Conventions: a module element is a column vector; ``left_act[a]`` is the
matrix of ``m -> t_a m`` and ``right_act[a]`` the matrix of ``m -> m t_a``
for the basis ``t_a`` of the acting ring.  Hence the right action is an
anti-homomorphism: ``ract(x y) = ract(y) @ ract(x)``.
"""
from dataclasses import dataclass

import numpy as np

from . import exactla as la
from .algebra import Ring, ValidationReport
from .errors import DimensionMismatch, IncompatibleAlgebras, PhiNotMultiplicative
from .exactla import Subspace

LINEARITIES = {"left": "left", "left-only": "left", "right": "right",
               "right-only": "right", "bilinear": "bilinear"}


class Bimodule:
    def __init__(self, left, right, left_act, right_act, name="", embedding=None):
        p = left.p
        self.left = left
        self.right = right
        self.p = p
        self.left_act = la.asmat(left_act, p)
        self.right_act = la.asmat(right_act, p)
        d = self.left_act.shape[-1] if self.left_act.size else self.right_act.shape[-1]
        self.dim = int(d) if self.left_act.ndim == 3 else 0
        if self.left_act.shape != (left.dim, self.dim, self.dim) or \
                self.right_act.shape != (right.dim, self.dim, self.dim):
            raise DimensionMismatch("action arrays do not match ring dimensions")
        self.name = name
        # (d_parent x d) matrix when this module was cut out of a larger one
        self.embedding = embedding

    def __repr__(self):
        return f"Bimodule({self.name or '?'}: {self.left.name}-{self.right.name}, dim={self.dim})"

    def lact(self, x):
        """Matrix of left multiplication by the ambient element x."""
        return np.tensordot(self.left.coords(x), self.left_act, axes=1) % self.p

    def ract(self, x):
        return np.tensordot(self.right.coords(x), self.right_act, axes=1) % self.p

    def validate(self):
        """Module axioms on basis elements and left/right commutation."""
        rep = ValidationReport()
        p = self.p
        for ring, acts, side in ((self.left, self.left_act, "left"), (self.right, self.right_act, "right")):
            B = ring.basis
            a = ring.algebra
            for i in range(ring.dim):
                for j in range(ring.dim):
                    prod = ring.coords(a.product(B[i], B[j]))
                    want = np.tensordot(prod, acts, axes=1) % p
                    got = acts[i] @ acts[j] % p if side == "left" else acts[j] @ acts[i] % p
                    if not np.array_equal(got, want):
                        rep.add(f"{side} action not multiplicative on ring basis pair ({i}, {j})")
        for i in range(self.left.dim):
            for j in range(self.right.dim):
                if not np.array_equal(self.left_act[i] @ self.right_act[j] % p,
                                      self.right_act[j] @ self.left_act[i] % p):
                    rep.add(f"left action {i} and right action {j} do not commute")
        return rep


def regular(ring, name=None):
    """The ring as a bimodule over itself, in the ring's own coordinates."""
    a = ring.algebra
    B = ring.basis
    k = ring.dim
    left = np.zeros((k, k, k), dtype=np.int64)
    right = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            c = ring.coords(a.product(B[i], B[j]))
            left[i, :, j] = c
            right[j, :, i] = c
    return Bimodule(ring, ring, left, right, name or ring.name)


def _restrict_acts(acts, old, new):
    if new == old:
        return acts
    if not old.contains_ring(new):
        raise IncompatibleAlgebras(f"{new.name} is not a subring of {old.name}")
    coeffs = np.array([old.coords(b) for b in new.basis], dtype=np.int64).reshape(new.dim, old.dim)
    return np.tensordot(coeffs, acts, axes=1) % old.p


def restrict(m, left=None, right=None):
    """Restriction of scalars to subrings."""
    left = left or m.left
    right = right or m.right
    if left == m.left and right == m.right:
        return m
    return Bimodule(left, right, _restrict_acts(m.left_act, m.left, left),
                    _restrict_acts(m.right_act, m.right, right), m.name, m.embedding)


def _sub_acts(acts, W):
    if W.dim == 0:
        return np.zeros((acts.shape[0], 0, 0), dtype=np.int64)
    img = np.einsum("aij,kj->aki", acts, W.matrix) % W.p  # images of basis vectors as rows
    return np.ascontiguousarray(np.transpose(img[..., W.pivots], (0, 2, 1)))


def submodule(m, W, name=None):
    """Restrict the actions of m to a stable subspace W (RREF basis)."""
    for acts in (m.left_act, m.right_act):
        for A in acts:
            for w in W.matrix:
                if not W.contains(A @ w):
                    raise ValueError("subspace is not stable under the actions")
    emb = W.matrix.T.copy() if W.dim else np.zeros((m.dim, 0), dtype=np.int64)
    return Bimodule(m.left, m.right, _sub_acts(m.left_act, W), _sub_acts(m.right_act, W),
                    name or m.name, emb)


def direct_sum(m, n, name=None):
    if m.left != n.left or m.right != n.right:
        raise IncompatibleAlgebras("direct sum needs equal rings")

    def block(a, b):
        out = np.zeros((a.shape[0], m.dim + n.dim, m.dim + n.dim), dtype=np.int64)
        out[:, : m.dim, : m.dim] = a
        out[:, m.dim:, m.dim:] = b
        return out

    return Bimodule(m.left, m.right, block(m.left_act, n.left_act), block(m.right_act, n.right_act),
                    name or f"{m.name}+{n.name}")


def unital_span(m, side="both"):
    """Span of u m v over local units u, v and basis elements m."""
    p = m.p
    units = m.left.local_units
    cols = []
    if side == "left":
        cols = [m.lact(u) for u in units]
    elif side == "right":
        cols = [m.ract(v) for v in units]
    else:
        cols = [m.lact(u) @ m.ract(v) % p for u in units for v in units]
    if m.dim == 0:
        return Subspace.zero(p, 0)
    return la.image(np.hstack(cols), p)


def check_unital(m):
    """True iff E m = m = m E (spans of local-unit translates are full)."""
    return unital_span(m, "left").dim == m.dim and unital_span(m, "right").dim == m.dim


def largest_unital(m):
    """The sub-bimodule E m E; equal to m exactly when m is unital."""
    return submodule(m, unital_span(m, "both"))


@dataclass(eq=False)
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    mat: np.ndarray
    linearity: str = "bilinear"

    def __post_init__(self):
        self.mat = la.asmat(self.mat, self.source.p).reshape(self.target.dim, self.source.dim)

    def __call__(self, v):
        return self.mat @ np.asarray(v) % self.source.p

    def __matmul__(self, other):
        return BimoduleMap(other.source, self.target, self.mat @ other.mat % self.source.p,
                           self.linearity)

    def is_invertible(self):
        return la.is_invertible(self.mat, self.source.p)

    def inverse(self):
        return BimoduleMap(self.target, self.source, la.inverse(self.mat, self.source.p),
                           self.linearity)

    def check(self):
        return is_hom(self.source, self.target, self.mat, self.linearity)


def is_hom(m, n, f, linearity="bilinear"):
    lin = LINEARITIES[linearity]
    p = m.p
    f = np.asarray(f)
    if lin in ("left", "bilinear"):
        for x in m.left.basis:
            if not np.array_equal(f @ m.lact(x) % p, n.lact(x) @ f % p):
                return False
    if lin in ("right", "bilinear"):
        for x in m.right.basis:
            if not np.array_equal(f @ m.ract(x) % p, n.ract(x) @ f % p):
                return False
    return True


def _constraints(dm, dn, acts_m, acts_n, p):
    rows = []
    Im, In = np.eye(dm, dtype=np.int64), np.eye(dn, dtype=np.int64)
    for A, B in zip(acts_m, acts_n):
        # row-major vec: vec(F A) = (I kron A^T) vec F, vec(B F) = (B kron I) vec F
        rows.append(np.kron(In, A.T) - np.kron(B, Im))
    return rows


def hom_system(m, n, linearity="bilinear"):
    """Constraint matrix whose null space is the hom space (row-major vec)."""
    lin = LINEARITIES[linearity]
    p = m.p
    rows = []
    if lin in ("left", "bilinear"):
        if m.left != n.left:
            raise IncompatibleAlgebras(f"left rings differ: {m.left} vs {n.left}")
        rows += _constraints(m.dim, n.dim, m.left_act, n.left_act, p)
    if lin in ("right", "bilinear"):
        if m.right != n.right:
            raise IncompatibleAlgebras(f"right rings differ: {m.right} vs {n.right}")
        rows += _constraints(m.dim, n.dim, m.right_act, n.right_act, p)
    if not rows:
        return np.zeros((0, m.dim * n.dim), dtype=np.int64)
    return np.vstack(rows) % p


def hom_basis(m, n, linearity="bilinear"):
    """Basis of the hom space as an array of shape (k, n.dim, m.dim)."""
    ker = la.kernel(hom_system(m, n, linearity), m.p) if m.dim * n.dim else Subspace.zero(m.p, 0)
    return ker.matrix.reshape(ker.dim, n.dim, m.dim).copy()


def hom_space(m, n, linearity="bilinear"):
    lin = LINEARITIES[linearity]
    return [BimoduleMap(m, n, f, lin) for f in hom_basis(m, n, lin)]


def combine(basis, coeffs, p):
    return np.tensordot(np.asarray(coeffs, dtype=np.int64), basis, axes=1) % p


def iso_search(m, n, linearity="bilinear"):
    """First invertible intertwiner m -> n in the lexicographic scan of the
    hom space basis, or None."""
    if m.dim != n.dim:
        return None
    lin = LINEARITIES[linearity]
    if m.dim == 0:
        return BimoduleMap(m, n, np.zeros((0, 0), dtype=np.int64), lin)
    basis = hom_basis(m, n, lin)
    coef = la.first_invertible(list(basis), m.p)
    if coef is None:
        return None
    return BimoduleMap(m, n, combine(basis, coef, m.p), lin)


class HomModule:
    """Hom_T(P, N) T for right T-modules, as a bimodule.

    Left action comes from N's left ring (a f)(x) = a f(x); right action is
    (f t)(x) = f(t x), which needs P to carry a left T-action.  Only the
    unital part is kept.  ``maps[i]`` is the (N.dim x P.dim) matrix of the
    i-th basis element.
    """

    def __init__(self, P, N):
        if P.right != N.right:
            raise IncompatibleAlgebras("Hom_T(P, N) needs a common right ring")
        if P.left != N.right:
            raise IncompatibleAlgebras("P must be a T-T bimodule")
        p = P.p
        self.P, self.N = P, N
        full = hom_basis(P, N, "right")
        k = len(full)
        flat = full.reshape(k, N.dim * P.dim)
        space = Subspace.span(flat, p, N.dim * P.dim) if k else Subspace.zero(p, N.dim * P.dim)

        def coords(f):
            c = space.coords(np.asarray(f).reshape(-1))
            if c is None:
                raise ValueError("map is not in the hom space")
            return c

        basis = space.matrix.reshape(space.dim, N.dim, P.dim)
        la_ = np.zeros((N.left.dim, space.dim, space.dim), dtype=np.int64)
        ra_ = np.zeros((P.left.dim, space.dim, space.dim), dtype=np.int64)
        for a in range(N.left.dim):
            for i, f in enumerate(basis):
                la_[a, :, i] = coords(N.left_act[a] @ f % p)
        for t in range(P.left.dim):
            for i, f in enumerate(basis):
                ra_[t, :, i] = coords(f @ P.left_act[t] % p)
        whole = Bimodule(N.left, P.left, la_, ra_, f"Hom({P.name},{N.name})")
        unital = unital_span(whole, "both") if space.dim else Subspace.zero(p, 0)
        self.module = submodule(whole, unital, f"Hom({P.name},{N.name}){P.left.name}")
        self.maps = np.tensordot(unital.matrix, basis, axes=1) % p if unital.dim else \
            np.zeros((0, N.dim, P.dim), dtype=np.int64)
        self._space = Subspace.span(self.maps.reshape(len(self.maps), -1), p, N.dim * P.dim) \
            if len(self.maps) else Subspace.zero(p, N.dim * P.dim)
        # coordinates w.r.t. self.maps: maps are RREF rows of the unital span
        assert np.array_equal(self._space.matrix, self.maps.reshape(len(self.maps), N.dim * P.dim))

    @property
    def dim(self):
        return self.module.dim

    def coords(self, f):
        c = self._space.coords(np.asarray(f).reshape(-1))
        if c is None:
            raise ValueError("map does not lie in the unital part of the hom space")
        return c

    def as_map(self, c):
        return combine(self.maps, c, self.P.p)


@dataclass(eq=False)
class TensorProduct:
    """m (x)_ring n as a quotient of the F_p-tensor product.

    ``proj`` sends the Kronecker coordinates (index i * n.dim + j) to
    quotient coordinates; ``section`` lifts them back.
    """

    ring: Ring
    m: Bimodule
    n: Bimodule
    module: Bimodule
    proj: np.ndarray
    section: np.ndarray

    @property
    def dim(self):
        return self.module.dim

    def elem(self, x, y):
        return self.proj @ np.kron(x, y) % self.ring.p

    def lifted(self):
        """Section as an array (m.dim, n.dim, dim)."""
        return self.section.reshape(self.m.dim, self.n.dim, self.dim)

    def balanced(self):
        """Balanced map as an array (dim, m.dim, n.dim): x, y -> x (x) y."""
        return self.proj.reshape(self.dim, self.m.dim, self.n.dim)


def tensor_over(ring, m, n, name=None):
    """m (x)_ring n with the outer actions of m.left and n.right.

    The right ring of m and the left ring of n are restricted to ``ring``
    when they are larger.
    """
    p = ring.p
    mr = restrict(m, right=ring)
    nl = restrict(n, left=ring)
    dm, dn = m.dim, n.dim
    N = dm * dn
    Im, In = np.eye(dm, dtype=np.int64), np.eye(dn, dtype=np.int64)
    if N:
        rels = np.hstack([np.kron(mr.right_act[a], In) - np.kron(Im, nl.left_act[a])
                          for a in range(ring.dim)]) % p if ring.dim else np.zeros((N, 0), dtype=np.int64)
        sub = la.image(rels, p) if rels.shape[1] else Subspace.zero(p, N)
    else:
        sub = Subspace.zero(p, 0)
    q, proj, sec = la.quotient_with_section(sub)
    left = np.stack([proj @ np.kron(A, In) @ sec % p for A in m.left_act]) if m.left.dim else \
        np.zeros((0, q, q), dtype=np.int64)
    right = np.stack([proj @ np.kron(Im, B) @ sec % p for B in n.right_act]) if n.right.dim else \
        np.zeros((0, q, q), dtype=np.int64)
    left = left.reshape(m.left.dim, q, q)
    right = right.reshape(n.right.dim, q, q)
    mod = Bimodule(m.left, n.right, left, right, name or f"({m.name}*{n.name})")
    return TensorProduct(ring, m, n, mod, proj, sec)


def tensor_maps(src, dst, f, g):
    """f (x) g : src -> dst for tensor products built by ``tensor_over``."""
    p = src.ring.p
    return dst.proj @ np.kron(np.asarray(f), np.asarray(g)) @ src.section % p


def associator(ring, m, n, k):
    """(m (x) n) (x) k -> m (x) (n (x) k), (x (x) y) (x) z -> x (x) (y (x) z).

    Returns (source, target, matrix); source and target are TensorProducts.
    """
    p = ring.p
    mn = tensor_over(ring, m, n)
    nk = tensor_over(ring, n, k)
    src = tensor_over(ring, mn.module, k)
    dst = tensor_over(ring, m, nk.module)
    Ik = np.eye(k.dim, dtype=np.int64)
    Im = np.eye(m.dim, dtype=np.int64)
    # lift to m (x)_F n (x)_F k, then push down the other way
    lift = np.kron(mn.section, Ik) @ src.section % p
    down = dst.proj @ np.kron(Im, nk.proj) % p
    return src, dst, down @ lift % p


def is_multiplicative(alg, phi):
    p = alg.p
    phi = np.asarray(phi)
    lhs = np.einsum("ijk,lk->ijl", alg.mul, phi) % p
    rhs = np.einsum("ai,bj,abl->ijl", phi, phi, alg.mul) % p
    return np.array_equal(lhs, rhs)


def twist(m, phi, name=None):
    """Same left action, right action through phi: m . t = m phi(t)."""
    ring = m.right
    if not ring.is_full:
        raise IncompatibleAlgebras("twisting needs the full algebra acting on the right")
    p = m.p
    phi = la.asmat(phi, p)
    if not is_multiplicative(ring.algebra, phi):
        raise PhiNotMultiplicative("twisting map is not multiplicative")
    # ract(t_a) becomes ract(phi(t_a)) = sum_b phi[b, a] ract(t_b)
    right = np.einsum("ba,bij->aij", phi, m.right_act) % p
    return Bimodule(m.left, m.right, m.left_act, right, name or f"{m.name}_phi", m.embedding)
