"""Triples (P, phi, X): P an invertible R-bimodule, X an invertible
S-bimodule and phi: P -> X R-bilinear such that

    phibar_r: P (x)_R S -> X,  p (x) s -> phi(p) s
    phibar_l: S (x)_R P -> X,  s (x) p -> s phi(p)

are isomorphisms.  Classes of such triples form a group under
(P, phi, X)(P', phi', X') = (P (x)_R P', chi, X (x)_S X').
"""
from dataclasses import dataclass

import numpy as np

from . import exactla as la
from .bimodule import (Bimodule, check_unital, combine, hom_basis, is_hom,
                       is_multiplicative, iso_search, restrict, tensor_maps, tensor_over, twist)
from .errors import (InternalError, NotInvertible, PentagonFailure, PhiNotBilinear,
                     WitnessInvalid, WitnessNotBilinear)
from .extgroups import coefficient_grid, context
from .groupkit import FiniteGroup
from .picard import PicardPair, inv_pair, picard_pair_verify, subbimodule, theta, twist_pair


@dataclass(eq=False)
class MsrObject:
    ext: object
    P: Bimodule
    X: Bimodule
    phi: np.ndarray
    phibar_r: np.ndarray
    phibar_l: np.ndarray
    tPS: object
    tSP: object
    pic_P: PicardPair = None
    pic_X: PicardPair = None
    name: str = ""

    @property
    def p(self):
        return self.ext.p

    def fingerprint(self):
        return self.P.dim, self.X.dim


def _phibars(ext, P, X, phi):
    ctx = context(ext)
    S, R, p, n = ext.S, ext.R, ext.p, ext.S.dim
    tPS = tensor_over(R, P, ctx.Sreg)
    tSP = tensor_over(R, ctx.Sreg, P)
    Fr = np.zeros((X.dim, P.dim * n), dtype=np.int64)
    Fl = np.zeros((X.dim, n * P.dim), dtype=np.int64)
    for b in range(n):
        s = S.basis_vector(b)
        xr = X.ract(s) @ phi % p
        xl = X.lact(s) @ phi % p
        for i in range(P.dim):
            Fr[:, i * n + b] = xr[:, i]
            Fl[:, b * P.dim + i] = xl[:, i]
    return Fr @ tPS.section % p, Fl @ tSP.section % p, tPS, tSP


def msr_verify(ext, P, X, phi, pic_P=None, pic_X=None, name=""):
    """Check (P, phi, X) and return it as an MsrObject."""
    R, Sring, p = ext.R, ext.Sring, ext.p
    if P.left != R or P.right != R:
        raise PhiNotBilinear("P must be an R-bimodule")
    if X.left != Sring or X.right != Sring:
        raise PhiNotBilinear("X must be an S-bimodule")
    phi = la.asmat(phi, p).reshape(X.dim, P.dim)
    if not is_hom(P, restrict(X, R, R), phi, "bilinear"):
        raise PhiNotBilinear("phi is not R-bilinear")
    if not (check_unital(P) and check_unital(X)):
        raise WitnessInvalid("P and X must be unital")
    r, l, tPS, tSP = _phibars(ext, P, X, phi)
    if not la.is_invertible(r, p):
        raise NotInvertible("phibar_r: P (x)_R S -> X is not an isomorphism", side="right")
    if not la.is_invertible(l, p):
        raise NotInvertible("phibar_l: S (x)_R P -> X is not an isomorphism", side="left")
    if pic_P is not None:
        pic_P = picard_pair_verify(pic_P)
    if pic_X is not None:
        pic_X = picard_pair_verify(pic_X)
    return MsrObject(ext, P, X, phi, r, l, tPS, tSP, pic_P, pic_X, name)


@dataclass
class SideReport:
    right_iso: bool
    left_iso: bool
    injective: bool
    preconditions: bool     # [P] and [X] invertible with witnesses supplied

    @property
    def holds(self):
        if not self.preconditions:
            return True
        return self.right_iso == self.left_iso and (self.injective or not self.right_iso)


def phibar_sides_check(ext, P, X, phi, pic_P=None, pic_X=None):
    p = ext.p
    phi = la.asmat(phi, p).reshape(X.dim, P.dim)
    r, l, _, _ = _phibars(ext, P, X, phi)
    pre = pic_P is not None and pic_X is not None
    if pre:
        try:
            picard_pair_verify(pic_P)
            picard_pair_verify(pic_X)
        except WitnessInvalid:
            pre = False
    inj = la.rank(phi, p) == P.dim
    return SideReport(la.is_invertible(r, p), la.is_invertible(l, p), inj, pre)


# named objects --------------------------------------------------------------

def neutral(ext):
    ctx = context(ext)
    return msr_verify(ext, ctx.Rreg, ctx.Sreg, ctx.R_emb, ctx.R_pair, ctx.S_pair, "1")


def Dprime(ext, x):
    """(X, inclusion, S) for an invertible subbimodule X with inverse Y."""
    ctx = context(ext)
    P = subbimodule(ext, x.X, "X")
    return msr_verify(ext, P, ctx.Sreg, x.X.matrix.T, inv_pair(ext, x.X, x.Y), ctx.S_pair, "D'")


def twisted_R_embedding(ext, gamma):
    """(R, iota, S_gamma) and its witnesses."""
    ctx = context(ext)
    p = ext.p
    gamma = la.asmat(gamma, p)
    if not is_multiplicative(ext.S, gamma):
        raise WitnessInvalid("gamma is not multiplicative")
    g_inv = la.inverse(gamma, p)
    Sg = twist(ctx.Sreg, gamma, "S_gamma")
    Sgi = twist(ctx.Sreg, g_inv, "S_gamma^-1")
    return ctx.Rreg, Sg, ctx.R_emb, ctx.R_pair, twist_pair(ext.Sring, Sg, Sgi, gamma, g_inv)


def E_map(ext, gamma):
    P, X, phi, pp, px = twisted_R_embedding(ext, gamma)
    return msr_verify(ext, P, X, phi, pp, px, "E")


def O_r(a):
    """S-bilinear iso X -> S if [X] = [S], else None."""
    m = iso_search(a.X, context(a.ext).Sreg, "bilinear")
    return None if m is None else m.mat


def O_l(a):
    """R-bilinear iso R -> P if [P] = [R], else None."""
    m = iso_search(context(a.ext).Rreg, a.P, "bilinear")
    return None if m is None else m.mat


# product, inverse, class equality ---------------------------------------------

def psr_mul(a, b):
    ext = a.ext
    if b.ext is not ext:
        raise InternalError("objects live over different extensions")
    p = ext.p
    TP = tensor_over(ext.R, a.P, b.P)
    TX = tensor_over(ext.Sring, a.X, b.X)
    chi = TX.proj @ np.kron(a.phi, b.phi) @ TP.section % p
    pic_P = pic_X = None
    if a.pic_P is not None and b.pic_P is not None:
        pic_P = _product_pair(a.pic_P, b.pic_P, TP)
    if a.pic_X is not None and b.pic_X is not None:
        pic_X = _product_pair(a.pic_X, b.pic_X, TX)
    return msr_verify(ext, TP.module, TX.module, chi, pic_P, pic_X, f"({a.name}.{b.name})")


def _product_pair(u, v, TP):
    w = u.product(v)
    # the product builds P (x) P' itself; it agrees with TP coordinate for coordinate
    if not np.array_equal(w.P.left_act, TP.module.left_act):
        raise InternalError("tensor product coordinates disagree")
    w.P = TP.module
    return w.normalize()


def _unit_iso_inverse(tp, M, side):
    """Inverse of the action map T (x) M -> M (side='left') or M (x) T -> M."""
    p = tp.ring.p
    T = tp.ring
    if side == "left":
        F = np.zeros((M.dim, T.dim * M.dim), dtype=np.int64)
        for a in range(T.dim):
            F[:, a * M.dim:(a + 1) * M.dim] = restrict(M, left=T).left_act[a]
    else:
        F = np.zeros((M.dim, M.dim * T.dim), dtype=np.int64)
        Mr = restrict(M, right=T)
        for a in range(T.dim):
            F[:, a::T.dim] = Mr.right_act[a]
    return la.inverse(F @ tp.section % p, p)


@dataclass
class InverseData:
    obj: MsrObject
    psi: np.ndarray
    square_ok: bool


def psr_inverse_data(a):
    if a.pic_P is None or a.pic_X is None:
        raise WitnessInvalid("inverse needs Picard witnesses for P and X")
    ext = a.ext
    ctx = context(ext)
    S, R, p, n = ext.S, ext.R, ext.p, ext.S.dim
    pP, pX = picard_pair_verify(a.pic_P), picard_pair_verify(a.pic_X)
    Q, Y = pP.Q, pX.Q
    # Q -> R (x) Q -> Hom_R(P, R)R
    thR = theta(pP, ctx.Rreg)
    unit_Q = _unit_iso_inverse(thR.tNQ, Q, "left")
    # phi*: sigma -> (sigma (x) S) o phibar_r^-1, landing in Hom_S(X, S)S
    thS = theta(pX, ctx.Sreg)
    rinv = la.inverse(a.phibar_r, p)
    phistar = np.zeros((thS.hom.dim, thR.hom.dim), dtype=np.int64)
    for k, sigma in enumerate(thR.hom.maps):
        G = np.zeros((n, a.P.dim * n), dtype=np.int64)
        for i in range(a.P.dim):
            v = R.to_ambient(sigma[:, i])
            for b in range(n):
                G[:, i * n + b] = S.product(v, S.basis_vector(b))
        phistar[:, k] = thS.hom.coords(G @ a.tPS.section @ rinv % p)
    # X*S -> S (x)_S Y -> Y
    gamma_inv = la.inverse(thS.mat, p)
    F = np.zeros((Y.dim, n * Y.dim), dtype=np.int64)
    for b in range(n):
        F[:, b * Y.dim:(b + 1) * Y.dim] = Y.left_act[b]
    mu_SY = F @ thS.tNQ.section % p
    psi = mu_SY @ gamma_inv @ phistar @ thR.mat @ unit_Q % p
    # l' o omega o (phi (x) psi) = iota o l   on P (x)_R Q
    tXY = pX.tPQ
    lhs = pX.l @ (tXY.proj @ np.kron(a.phi, psi) @ pP.tPQ.section % p) % p
    rhs = R.embedding @ pP.l % p
    ok = np.array_equal(lhs, rhs)
    obj = msr_verify(ext, Q, Y, psi, pP.swap(), pX.swap(), f"{a.name}^-1")
    return InverseData(obj, psi, ok)


def psr_inverse(a):
    d = psr_inverse_data(a)
    if not d.square_ok:
        raise PentagonFailure("inverse square does not commute")
    return d.obj


def psr_class_eq(a, b):
    """(alpha, beta) with phi_b alpha = beta phi_a, both invertible, or None."""
    if a.P.dim != b.P.dim or a.X.dim != b.X.dim:
        return None
    p = a.p
    A = hom_basis(a.P, b.P, "bilinear")
    B = hom_basis(a.X, b.X, "bilinear")
    if len(A) == 0 or len(B) == 0:
        return None
    cols = [(b.phi @ Ai % p).reshape(-1) for Ai in A] + [(-Bj @ a.phi % p).reshape(-1) for Bj in B]
    M = np.stack(cols, axis=1) % p
    sol = la.kernel(M, p)
    if sol.dim == 0:
        return None
    dP, dX = a.P.dim, a.X.dim
    blocks = []
    for v in sol.matrix:
        al = combine(A, v[:len(A)], p)
        be = combine(B, v[len(A):], p)
        blk = np.zeros((dP + dX, dP + dX), dtype=np.int64)
        blk[:dP, :dP] = al
        blk[dP:, dP:] = be
        blocks.append(blk)
    c = la.first_invertible(blocks, p)
    if c is None:
        return None
    blk = combine(np.array(blocks), c, p)
    return blk[:dP, :dP].copy(), blk[dP:, dP:].copy()


# reductions --------------------------------------------------------------------

def reduce_ker_Or(ext, a, beta):
    """V = beta(phi(P)) in S, an invertible subbimodule with D'(V) ~ a."""
    ctx = context(ext)
    p = ext.p
    beta = la.asmat(beta, p)
    if not (is_hom(a.X, ctx.Sreg, beta, "bilinear") and la.is_invertible(beta, p)):
        raise WitnessNotBilinear("beta is not an S-bilinear isomorphism X -> S")
    V = la.image(beta @ a.phi % p, p)
    x = ctx.inv.payload.get(V.key)
    if x is None:
        raise InternalError("beta(phi(P)) is not an invertible subbimodule")
    if psr_class_eq(Dprime(ext, x), a) is None:
        raise InternalError("D'(V) is not isomorphic to the reduced object")
    return x


@dataclass
class OlReduction:
    gamma: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray


def reduce_ker_Ol_data(ext, a, f):
    ctx = context(ext)
    R, p, n = ext.R, ext.p, ext.S.dim
    f = la.asmat(f, p).reshape(a.P.dim, R.dim)
    if not (is_hom(ctx.Rreg, a.P, f, "bilinear") and la.is_invertible(f, p)):
        raise WitnessNotBilinear("f is not an R-bilinear isomorphism R -> P")
    In = np.eye(n, dtype=np.int64)
    tRS = tensor_over(R, ctx.Rreg, ctx.Sreg)
    tSR = tensor_over(R, ctx.Sreg, ctx.Rreg)
    alpha = a.phibar_r @ tensor_maps(tRS, a.tPS, f, In) @ _unit_iso_inverse(tRS, ctx.Sreg, "left") % p
    beta = a.phibar_l @ tensor_maps(tSR, a.tSP, In, f) @ _unit_iso_inverse(tSR, ctx.Sreg, "right") % p
    gamma = la.inverse(beta, p) @ alpha % p
    if not is_multiplicative(ext.S, gamma):
        raise InternalError("gamma is not multiplicative")
    if not np.array_equal(gamma @ ctx.R_emb % p, ctx.R_emb):
        raise InternalError("gamma does not fix R")
    if not is_hom(twist(ctx.Sreg, gamma), a.X, beta, "bilinear"):
        raise InternalError("beta is not S-bilinear from S_gamma")
    return OlReduction(gamma, alpha, beta)


def reduce_ker_Ol(ext, a, f):
    """gamma in Aut_{R-rings}(S) with E(gamma) ~ a."""
    g = reduce_ker_Ol_data(ext, a, f).gamma
    if psr_class_eq(E_map(ext, g), a) is None:
        raise InternalError("E(gamma) is not isomorphic to the reduced object")
    return g


# the subgroup generated by D'(Inv) and E(Aut_{R-rings}(S)) -------------------------

DEFAULT_CAP = 64


@dataclass(eq=False)
class PsrGroup:
    """Classes reached from the generators; keys are discovery indices."""

    ext: object
    reps: list
    group: FiniteGroup
    dprime: dict            # Inv key -> class index
    emap: dict              # aut_rrings key -> class index
    capped: bool
    cap: int

    def __len__(self):
        return len(self.reps)


def find_class(reps, obj):
    fp = obj.fingerprint()
    for i, r in enumerate(reps):
        if r.fingerprint() == fp and psr_class_eq(r, obj) is not None:
            return i
    return None


def generate(ext, cap=DEFAULT_CAP):
    ctx = context(ext)
    reps = [neutral(ext)]
    gens = []
    dprime, emap = {}, {}

    def locate(obj):
        i = find_class(reps, obj)
        if i is None:
            if len(reps) >= cap:
                return None
            reps.append(obj)
            i = len(reps) - 1
        return i

    capped = False
    for k in ctx.inv:
        o = Dprime(ext, ctx.inv.payload[k])
        dprime[k] = locate(o)
        gens.append(o)
    for k in ctx.aut_rrings:
        o = E_map(ext, ctx.aut_rrings.payload[k])
        emap[k] = locate(o)
        gens.append(o)
    if None in dprime.values() or None in emap.values():
        capped = True
    # close under right multiplication by generators
    table = {}
    frontier = list(range(len(reps)))
    seen = set(frontier)
    while frontier and not capped:
        nxt = []
        for i in frontier:
            for g in gens:
                j = locate(psr_mul(reps[i], g))
                if j is None:
                    capped = True
                    break
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
            if capped:
                break
        frontier = nxt
    keys = list(range(len(reps)))
    if not capped:
        for i in keys:
            for j in keys:
                table[(i, j)] = locate(psr_mul(reps[i], reps[j]))
        if None in table.values():
            capped = True
    if capped:
        # partial: only what was reached; no table
        table = {}
    grp = FiniteGroup(keys, table, 0, dict(enumerate(reps)), "P(S/R)")
    return PsrGroup(ext, reps, grp, dprime, emap, capped, cap)


def psr_group(ext, cap=DEFAULT_CAP):
    ctx = context(ext)
    cache = ctx.__dict__.setdefault("_psr", {})
    if cap not in cache:
        cache[cap] = generate(ext, cap)
    return cache[cap]


# objects for the two-sided invertibility sweep ---------------------------------

def sweep_objects(ext, limit=None):
    """(P, X, phi, pic_P, pic_X) over P in {R} + Inv, X in {S} + twists, all phi."""
    ctx = context(ext)
    p = ext.p
    Ps = [(ctx.Rreg, ctx.R_pair)]
    for k in ctx.inv:
        x = ctx.inv.payload[k]
        if x.X != ext.R_space:
            Ps.append((subbimodule(ext, x.X), inv_pair(ext, x.X, x.Y)))
    Xs = [(ctx.Sreg, ctx.S_pair)]
    for k in ctx.aut_rrings:
        g = ctx.aut_rrings.payload[k]
        if not np.array_equal(g, np.eye(ext.S.dim, dtype=np.int64)):
            _, Sg, _, _, pg = twisted_R_embedding(ext, g)
            Xs.append((Sg, pg))
    out = []
    for P, pp in Ps:
        for X, px in Xs:
            basis = hom_basis(P, restrict(X, ext.R, ext.R), "bilinear")
            for c in coefficient_grid(len(basis), p):
                phi = combine(basis, c, p) if len(basis) else np.zeros((X.dim, P.dim), dtype=np.int64)
                out.append((P, X, phi, pp, px))
                if limit and len(out) >= limit:
                    return out
    return out
