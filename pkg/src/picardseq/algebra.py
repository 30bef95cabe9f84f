"""Finite-dimensional F_p-algebras with a declared finite set of local units."""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from . import exactla as la
from .errors import InternalError
from .exactla import Subspace


@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok

    def add(self, msg):
        self.problems.append(msg)


class IdempotentedAlgebra:
    """Structure-constant algebra: ``b_i b_j = sum_k mul[i, j, k] b_k``."""

    def __init__(self, p, mul, local_units, basis_names=None):
        la.check_prime(p)
        self.p = p
        self.mul = la.asmat(mul, p)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n, n):
            raise la.DimensionMismatch(f"structure constants must be n x n x n, got {self.mul.shape}")
        self.dim = n
        self.local_units = la.asmat(np.asarray(local_units).reshape(-1, n), p)
        self.basis_names = list(basis_names) if basis_names else [f"b{i}" for i in range(n)]
        self.mul.flags.writeable = False
        self.local_units.flags.writeable = False

    def __repr__(self):
        return f"IdempotentedAlgebra(p={self.p}, dim={self.dim}, |E|={len(self.local_units)})"

    def product(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.mul) % self.p

    def left_mult(self, x):
        """Matrix of y -> x y."""
        return np.einsum("i,ijk->kj", x, self.mul) % self.p

    def right_mult(self, x):
        """Matrix of y -> y x."""
        return np.einsum("j,ijk->ki", x, self.mul) % self.p

    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def format(self, x):
        terms = []
        for c, name in zip(np.asarray(x) % self.p, self.basis_names):
            if c:
                terms.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(terms) or "0"

    @cached_property
    def full(self):
        return Ring(self, Subspace.full(self.p, self.dim), "S")


class Ring:
    """A subalgebra of an IdempotentedAlgebra given by a subspace.

    Elements are handled in ambient coordinates; ``coords`` converts to the
    subspace's RREF basis.  The whole algebra is ``Ring(alg, full space)``.
    """

    def __init__(self, algebra, space, name="R"):
        self.algebra = algebra
        self.space = space
        self.name = name
        self.p = algebra.p

    def __repr__(self):
        return f"Ring({self.name}, dim={self.dim})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.algebra is other.algebra and self.space == other.space

    def __hash__(self):
        return hash((id(self.algebra), self.space))

    @property
    def dim(self):
        return self.space.dim

    @property
    def basis(self):
        return self.space.matrix

    @property
    def is_full(self):
        return self.dim == self.algebra.dim

    def coords(self, x):
        c = self.space.coords(x)
        if c is None:
            raise ValueError(f"element {x} is not in {self.name}")
        return c

    def to_ambient(self, c):
        return (np.asarray(c) @ self.basis) % self.p

    @cached_property
    def embedding(self):
        """Ambient-coordinate matrix of the inclusion into the algebra."""
        return self.basis.T.copy()

    def contains_ring(self, other):
        return self.algebra is other.algebra and other.space <= self.space

    @cached_property
    def local_units(self):
        return self.algebra.local_units

    @cached_property
    def local_unit_coords(self):
        return [self.coords(u) for u in self.local_units]

    def elements(self):
        for c in product(range(self.p), repeat=self.dim):
            yield self.to_ambient(np.array(c, dtype=np.int64))


@dataclass
class RingExtension:
    S: IdempotentedAlgebra
    R_space: Subspace
    name: str = ""

    @cached_property
    def R(self):
        return Ring(self.S, self.R_space, "R")

    @property
    def Sring(self):
        return self.S.full

    @property
    def p(self):
        return self.S.p


def _is_idempotent(a, u):
    return np.array_equal(a.product(u, u), u % a.p)


def _fixes(a, u, x):
    x = x % a.p
    return np.array_equal(a.product(u, x), x) and np.array_equal(a.product(x, u), x)


def validate_algebra(a):
    """Associativity, idempotent local units, coverage and directedness."""
    rep = ValidationReport()
    n, p = a.dim, a.p
    # (b_i b_j) b_k and b_i (b_j b_k) as n^3 x n arrays
    left = np.einsum("ijm,mkl->ijkl", a.mul, a.mul) % p
    right = np.einsum("jkm,iml->ijkl", a.mul, a.mul) % p
    bad = np.argwhere(np.any(left != right, axis=3))
    for i, j, k in bad:
        rep.add(f"non-associative on basis triple ({a.basis_names[i]}, {a.basis_names[j]}, {a.basis_names[k]})")
    units = a.local_units
    if len(units) == 0:
        rep.add("local unit set is empty")
        return rep
    for t, u in enumerate(units):
        if not _is_idempotent(a, u):
            rep.add(f"local unit #{t} ({a.format(u)}) is not idempotent")
    for i in range(n):
        b = a.basis_vector(i)
        if not any(_fixes(a, u, b) for u in units):
            rep.add(f"no local unit fixes basis element {a.basis_names[i]} on both sides")
    for s, t in product(range(len(units)), repeat=2):
        if s >= t:
            continue
        u, v = units[s], units[t]
        if not any(_fixes(a, w, u) and _fixes(a, w, v) for w in units):
            rep.add(f"local units #{s} and #{t} have no common unit (not directed)")
    return rep


def unit_for(a, elems):
    """First local unit e (in declared order) with e x = x e = x for all x."""
    if isinstance(a, Ring):
        a = a.algebra
    for u in a.local_units:
        if all(_fixes(a, u, np.asarray(x)) for x in elems):
            return u.copy()
    raise InternalError("no local unit covers the given elements; algebra not validated?")


def units_for(a, elems):
    """All of Unit{elems}."""
    if isinstance(a, Ring):
        a = a.algebra
    return [u.copy() for u in a.local_units if all(_fixes(a, u, np.asarray(x)) for x in elems)]


def corner(ring, e):
    """The Peirce corner e A e as a Subspace (ambient coordinates)."""
    a = ring.algebra
    vecs = [a.product(a.product(e, b), e) for b in ring.basis]
    return Subspace.span(np.array(vecs).reshape(-1, a.dim), a.p, a.dim)


def corner_center_units(ring, e):
    """U(Z(e A e)) as a list of ambient vectors."""
    if isinstance(ring, IdempotentedAlgebra):
        ring = ring.full
    a = ring.algebra
    p = a.p
    e = np.asarray(e) % p
    cor = corner(ring, e)
    gens = cor.matrix
    out = []
    for c in product(range(p), repeat=cor.dim):
        z = (np.array(c, dtype=np.int64) @ gens) % p if cor.dim else np.zeros(a.dim, dtype=np.int64)
        if not all(np.array_equal(a.product(z, g), a.product(g, z)) for g in gens):
            continue
        # z w = e for w in the corner: solve through the corner basis
        if cor.dim == 0:
            continue
        lz = a.left_mult(z) @ gens.T % p
        w = la.solve(lz, e, p)
        if w is None:
            continue
        wv = (w @ gens) % p
        if np.array_equal(a.product(wv, z), e):
            out.append(z)
    return out


def validate_extension(ext):
    rep = validate_algebra(ext.S)
    a = ext.S
    R = ext.R_space
    if R.ambient_dim != a.dim or R.p != a.p:
        rep.add("R subspace does not live in S")
        return rep
    gens = R.matrix
    for i, x in enumerate(gens):
        for j, y in enumerate(gens):
            if not R.contains(a.product(x, y)):
                rep.add(f"R not closed under multiplication (basis pair {i}, {j})")
    for t, u in enumerate(a.local_units):
        if not R.contains(u):
            rep.add(f"local unit #{t} ({a.format(u)}) is not in R")
    # E must be a local-unit set for R with the same witnesses
    for i, x in enumerate(gens):
        if not any(_fixes(a, u, x) for u in a.local_units if R.contains(u)):
            rep.add(f"no local unit in R fixes R basis element {i}")
    return rep
