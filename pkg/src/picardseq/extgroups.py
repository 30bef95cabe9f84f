"""The groups attached to an extension R in S and the maps between them.

    Inv(R in S)      invertible unital R-subbimodules of S, law X.X' = span XX'
    Aut_{S-R}(S)     invertible S-R-bilinear endomorphisms of S, law composition
    Aut_{R-rings}(S) ring automorphisms of S fixing R pointwise
    D(l)   = l^-1(R)
    hat(l) = s -> l^-1(e) s l(e),  e a local unit fixing s

Group elements are keyed by bytes (RREF bases or matrices); the payload
dict of each group holds the actual objects.  Everything derived from an
extension is cached on a ``Context``.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from . import exactla as la
from .algebra import corner_center_units, unit_for, units_for
from .bimodule import hom_basis, hom_system, is_hom, iso_search, regular, restrict, twist
from .errors import InternalError, WitnessNotBilinear
from .exactla import Subspace
from .groupkit import FiniteGroup, GroupHom, is_subgroup_of_center, kernel
from .picard import span_product, inv_pair, mult_maps, subbimodule, trivial_pair, twist_pair

BATCH = 4096


def mkey(m):
    return np.ascontiguousarray(m, dtype=np.int64).tobytes()


@dataclass(eq=False)
class InvElem:
    X: Subspace
    Y: Subspace

    @property
    def key(self):
        return self.X.key


@dataclass(eq=False)
class TwistClass:
    phi: np.ndarray
    module: object        # S_phi
    pair: object          # witness with inverse S_{phi^-1}
    omega: object         # S -> S_phi iso when the class is trivial, else None

    @property
    def trivial(self):
        return self.omega is not None


def context(ext):
    ctx = ext.__dict__.get("_ctx")
    if ctx is None:
        ctx = ext.__dict__["_ctx"] = Context(ext)
    return ctx


def coefficient_grid(k, p):
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(product(range(p), repeat=k)), dtype=np.int64)


def _batches(base, basis, p):
    """All base + combinations of basis, in chunks of shape (N, d, d)."""
    grid = coefficient_grid(len(basis), p)
    for start in range(0, len(grid), BATCH):
        c = grid[start:start + BATCH]
        if len(basis):
            yield (base + np.tensordot(c, basis, axes=1)) % p
        else:
            yield base[None] % p


def _invertible_mask(mats, p):
    return np.array([la.is_invertible(m, p) for m in mats], dtype=bool)


def _multiplicative_mask(alg, mats):
    p = alg.p
    lhs = np.einsum("ijk,Nlk->Nijl", alg.mul, mats) % p
    rhs = np.einsum("Nai,Nbj,abl->Nijl", mats, mats, alg.mul) % p
    return np.all((lhs == rhs).reshape(len(mats), -1), axis=1)


def _matrix_group(mats, p, name):
    keys = [mkey(m) for m in mats]
    payload = dict(zip(keys, mats))
    n = mats[0].shape[0]

    def op(a, b):
        return mkey(payload[a] @ payload[b] % p)

    return FiniteGroup.from_operation(keys, op, mkey(np.eye(n, dtype=np.int64)), payload, name)


class Context:
    def __init__(self, ext):
        self.ext = ext
        self.S, self.R, self.p = ext.S, ext.R, ext.p
        self.n = ext.S.dim

    # modules and witnesses ------------------------------------------------
    @cached_property
    def Sreg(self):
        return regular(self.ext.Sring)

    @cached_property
    def Rreg(self):
        return regular(self.R)

    @cached_property
    def S_SR(self):
        return restrict(self.Sreg, right=self.R)

    @cached_property
    def S_RR(self):
        return restrict(self.Sreg, self.R, self.R)

    @cached_property
    def R_pair(self):
        return trivial_pair(self.R)

    @cached_property
    def S_pair(self):
        return trivial_pair(self.ext.Sring)

    @cached_property
    def R_emb(self):
        return self.R.embedding

    # groups -----------------------------------------------------------------
    @cached_property
    def inv(self):
        return inv_group(self.ext)

    @cached_property
    def aut_sr(self):
        return aut_sr(self.ext)

    @cached_property
    def aut_rrings(self):
        return aut_rrings(self.ext)

    @cached_property
    def aut_ss(self):
        """Invertible S-bilinear endomorphisms of S."""
        p = self.p
        basis = hom_basis(self.Sreg, self.Sreg, "bilinear")
        mats = [m for b in _batches(np.zeros((self.n, self.n), dtype=np.int64), basis, p)
                for m, ok in zip(b, _invertible_mask(b, p)) if ok]
        return _matrix_group(mats, p, "Aut_{S-S}(S)")

    @cached_property
    def D(self):
        g, inv = self.aut_sr, self.inv
        return GroupHom(g, inv, lambda k: D(self.ext, g.payload[k]).key, "D")

    @cached_property
    def hat(self):
        g, a = self.aut_sr, self.aut_rrings
        return GroupHom(g, a, lambda k: mkey(hat(self.ext, g.payload[k])), "hat")

    @cached_property
    def ker_D(self):
        return kernel(self.D, "Ker D")

    @cached_property
    def ker_hat(self):
        return kernel(self.hat, "Ker hat")

    @cached_property
    def ker_both(self):
        kd = set(self.ker_D)
        return self.aut_sr.subgroup([k for k in self.ker_hat if k in kd], "Ker D & Ker hat")

    def twist_class(self, key):
        cache = self.__dict__.setdefault("_twists", {})
        if key not in cache:
            cache[key] = s_twist_class(self.ext, self.aut_rrings.payload[key])
        return cache[key]

    def inv_module(self, key):
        x = self.inv.payload[key]
        return subbimodule(self.ext, x.X)

    def inv_trivial(self, key):
        """[X] = [R] in Pic(R)?"""
        return iso_search(self.inv_module(key), self.Rreg, "bilinear") is not None


# Inv(R in S) -----------------------------------------------------------------

def _closure(S, R, vecs):
    """Smallest R-subbimodule of S containing vecs."""
    p = S.p
    L = [S.left_mult(r) for r in R.basis]
    Rt = [S.right_mult(r) for r in R.basis]
    W = Subspace.span(np.asarray(vecs).reshape(-1, S.dim), p, S.dim)
    while True:
        more = [A @ w % p for A in L + Rt for w in W.matrix]
        W2 = W + Subspace.span(np.array(more).reshape(-1, S.dim), p, S.dim) if more else W
        if W2 == W:
            return W
        W = W2


def subbimodules(ext):
    """All R-subbimodules of S: sums of cyclic ones, found breadth first."""
    S, R, p = ext.S, ext.R, ext.p
    cyclic = {}
    for c in product(range(p), repeat=S.dim):
        v = np.array(c, dtype=np.int64)
        if not v.any():
            continue
        W = _closure(S, R, v)
        cyclic.setdefault(W.key, W)
    zero = Subspace.zero(p, S.dim)
    found = {zero.key: zero}
    frontier = [zero]
    gens = list(cyclic.values())
    while frontier:
        nxt = []
        for W in frontier:
            for C in gens:
                V = W + C
                if V.key not in found:
                    found[V.key] = V
                    nxt.append(V)
        frontier = nxt
    return sorted(found.values(), key=lambda W: (W.dim, W.key))


def _is_unital_sub(S, W):
    if W.dim == 0:
        return True
    units = S.local_units
    left = Subspace.span(np.array([S.product(u, w) for u in units for w in W.matrix]), S.p, S.dim)
    right = Subspace.span(np.array([S.product(w, u) for u in units for w in W.matrix]), S.p, S.dim)
    return left == W and right == W


def inv_group(ext):
    S = ext.S
    subs = [W for W in subbimodules(ext) if W.dim and _is_unital_sub(S, W)]
    Rsp = ext.R_space
    elems = {}
    for X in subs:
        Ys = [Y for Y in subs if Y.dim == X.dim and span_product(S, X, Y) == Rsp
              and span_product(S, Y, X) == Rsp]
        if len(Ys) > 1:
            raise InternalError(f"{len(Ys)} inverses found for one invertible subbimodule")
        if Ys:
            elems[X.key] = InvElem(X, Ys[0])
    if Rsp.key not in elems:
        raise InternalError("R is missing from Inv")
    keys = sorted(elems, key=lambda k: (elems[k].X.dim, k != Rsp.key, k))

    def op(a, b):
        return span_product(S, elems[a].X, elems[b].X).key

    return FiniteGroup.from_operation(keys, op, Rsp.key, elems, "Inv")


# Aut_{S-R}(S), Aut_{R-rings}(S) -------------------------------------------------

def aut_sr(ext):
    ctx = context(ext)
    p, n = ext.p, ext.S.dim
    basis = hom_basis(ctx.S_SR, ctx.S_SR, "bilinear")
    mats = [m for b in _batches(np.zeros((n, n), dtype=np.int64), basis, p)
            for m, ok in zip(b, _invertible_mask(b, p)) if ok]
    return _matrix_group(mats, p, "Aut_{S-R}(S)")


def rring_affine(ext):
    """(particular, kernel basis) of R-bilinear f: S -> S with f|_R = id."""
    ctx = context(ext)
    p, n = ext.p, ext.S.dim
    A = hom_system(ctx.S_RR, ctx.S_RR, "bilinear")
    E = ctx.R_emb
    rows, rhs = [], []
    for i in range(n):
        for c in range(E.shape[1]):
            row = np.zeros(n * n, dtype=np.int64)
            row[i * n: (i + 1) * n] = E[:, c]
            rows.append(row)
            rhs.append(E[i, c])
    M = np.vstack([A, np.array(rows)]) % p
    b = np.concatenate([np.zeros(len(A), dtype=np.int64), np.array(rhs, dtype=np.int64)])
    f0 = la.solve(M, b, p)
    if f0 is None:
        raise InternalError("identity does not satisfy the ring-automorphism constraints")
    ker = la.kernel(M, p)
    return f0.reshape(n, n), ker.matrix.reshape(ker.dim, n, n)


def aut_rrings(ext):
    p = ext.p
    base, basis = rring_affine(ext)
    mats = []
    for b in _batches(base, basis, p):
        b = b[_multiplicative_mask(ext.S, b)]
        mats += [m for m, ok in zip(b, _invertible_mask(b, p)) if ok]
    return _matrix_group(mats, p, "Aut_{R-rings}(S)")


# D and hat ------------------------------------------------------------------

def _apply_space(f, W, p, n):
    if W.dim == 0:
        return W
    return Subspace.span((f @ W.matrix.T % p).T, p, n)


def D(ext, lam):
    """lam^-1(R) with inverse witness lam(R)."""
    p, n = ext.p, ext.S.dim
    X = _apply_space(la.inverse(lam, p), ext.R_space, p, n)
    Y = _apply_space(lam, ext.R_space, p, n)
    if span_product(ext.S, X, Y) != ext.R_space or span_product(ext.S, Y, X) != ext.R_space:
        raise InternalError("D(lambda) is not invertible")
    return InvElem(X, Y)


def hat_with_units(ext, lam, choose):
    S, p, n = ext.S, ext.p, ext.S.dim
    lam_inv = la.inverse(lam, p)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        b = S.basis_vector(i)
        e = choose(b)
        out[:, i] = S.product(S.product(lam_inv @ e % p, b), lam @ e % p)
    return out


def hat(ext, lam):
    """s -> lam^-1(e) s lam(e) with e the first local unit fixing s."""
    return hat_with_units(ext, np.asarray(lam), lambda b: unit_for(ext.S, [b]))


def hat_unit_independent(ext, lam):
    """Recompute hat with every admissible unit per basis element."""
    S, p = ext.S, ext.p
    lam = np.asarray(lam)
    ref = hat(ext, lam)
    lam_inv = la.inverse(lam, p)
    for i in range(S.dim):
        b = S.basis_vector(i)
        for e in units_for(S, [b]):
            v = S.product(S.product(lam_inv @ e % p, b), lam @ e % p)
            if not np.array_equal(v, ref[:, i]):
                return False
    return True


def unit_images_invert(ext, lam):
    """lam(e) lam^-1(e) = e = lam^-1(e) lam(e) for every local unit."""
    S, p = ext.S, ext.p
    lam = np.asarray(lam)
    lam_inv = la.inverse(lam, p)
    for e in S.local_units:
        a, b = lam @ e % p, lam_inv @ e % p
        if not (np.array_equal(S.product(a, b), e) and np.array_equal(S.product(b, a), e)):
            return False
    return True


def _unit_char(ext, ring, lam):
    p = ext.p
    for e in ext.S.local_units:
        allowed = {tuple(z) for z in corner_center_units(ring, e)}
        if tuple(lam @ e % p) not in allowed:
            return False
    return True


@dataclass
class KernelReport:
    kernel: FiniteGroup
    characterized: bool      # kernel = {lam : lam(e) in U(Z(eAe)) for all e}
    central: bool = True     # Ker D inside the center (D only)
    equals_aut_ss: bool = True  # Ker hat = Aut_{S-S}(S) (hat only)


def ker_D_characterize(ext):
    ctx = context(ext)
    g = ctx.aut_sr
    K = ctx.ker_D
    described = {k for k in g if _unit_char(ext, ext.R, g.payload[k])}
    return KernelReport(K, described == set(K), is_subgroup_of_center(K, g))


def ker_hat_characterize(ext):
    ctx = context(ext)
    g = ctx.aut_sr
    K = ctx.ker_hat
    described = {k for k in g if _unit_char(ext, ext.Sring, g.payload[k])}
    return KernelReport(K, described == set(K), True, set(ctx.aut_ss) == set(K))


# twisted bimodules --------------------------------------------------------------

def s_twist_class(ext, phi):
    ctx = context(ext)
    p = ext.p
    phi = la.asmat(phi, p)
    phi_inv = la.inverse(phi, p)
    Sphi = twist(ctx.Sreg, phi, "S_phi")
    Sinv = twist(ctx.Sreg, phi_inv, "S_phi^-1")
    pair = twist_pair(ext.Sring, Sphi, Sinv, phi, phi_inv)
    omega = iso_search(ctx.Sreg, Sphi, "bilinear")
    return TwistClass(phi, Sphi, pair, None if omega is None else omega.mat)


def reduce_ker_stwist(ext, phi, omega):
    """An element lam of Aut_{S-R}(S) with hat(lam) = phi, from an iso S -> S_phi."""
    ctx = context(ext)
    p = ext.p
    phi, omega = la.asmat(phi, p), la.asmat(omega, p)
    if not is_hom(ctx.Sreg, twist(ctx.Sreg, phi), omega, "bilinear"):
        raise WitnessNotBilinear("omega does not intertwine S and S_phi")
    if not la.is_invertible(omega, p):
        raise WitnessNotBilinear("omega is not invertible")
    lam = omega
    if not is_hom(ctx.S_SR, ctx.S_SR, lam, "bilinear"):
        raise InternalError("omega is not S-R-bilinear")
    if not np.array_equal(hat(ext, lam), phi):
        raise InternalError("hat(omega) differs from phi")
    return lam


def inv_elem_of(ext, V):
    """The InvElem with first component V, or None if V is not invertible."""
    return context(ext).inv.payload.get(V.key)


__all__ = ["InvElem", "TwistClass", "Context", "context", "inv_group", "aut_sr", "aut_rrings",
           "D", "hat", "hat_unit_independent", "unit_images_invert", "ker_D_characterize",
           "ker_hat_characterize", "s_twist_class", "reduce_ker_stwist", "subbimodules",
           "mult_maps", "inv_pair", "mkey"]
