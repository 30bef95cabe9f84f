"""Invertibility witnesses for bimodules under the tensor product.

A PicardPair over a ring T is (P, Q, r, l) with T-bilinear isomorphisms
r: Q (x)_T P -> T and l: P (x)_T Q -> T.  Maps into T are stored in T's own
coordinates.  After ``normalize`` the pair satisfies the associativity
conditions

    l(p (x) q) p' = p r(q (x) p'),     r(q (x) p) q' = q l(p (x) q'),

which imply both five-fold coherence identities checked by ``coherence``.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import exactla as la
from .algebra import unit_for, units_for
from .bimodule import (HomModule, combine, hom_basis, is_hom, iso_search, regular,
                       restrict, submodule, tensor_over)
from .errors import NotInvertiblePair, WitnessInvalid


def _pairing(f, tp):
    """F-level 3-tensor of a map out of a tensor product: [a, i, j]."""
    return (f @ tp.proj % tp.ring.p).reshape(-1, tp.m.dim, tp.n.dim)


@dataclass(eq=False)
class PicardPair:
    ring: object
    P: object
    Q: object
    r: np.ndarray          # T.dim x dim(Q (x) P)
    l: np.ndarray          # T.dim x dim(P (x) Q)
    tQP: object = None
    tPQ: object = None
    normalized: bool = False

    def __post_init__(self):
        if self.tQP is None:
            self.tQP = tensor_over(self.ring, self.Q, self.P)
        if self.tPQ is None:
            self.tPQ = tensor_over(self.ring, self.P, self.Q)
        p = self.ring.p
        self.r = la.asmat(self.r, p).reshape(self.ring.dim, self.tQP.dim)
        self.l = la.asmat(self.l, p).reshape(self.ring.dim, self.tPQ.dim)

    @property
    def p(self):
        return self.ring.p

    def swap(self):
        """The same data read as a witness for Q with inverse P."""
        return PicardPair(self.ring, self.Q, self.P, self.l, self.r, self.tPQ, self.tQP,
                          self.normalized)

    def tensors(self):
        p = self.p
        return dict(
            L=_pairing(self.l, self.tPQ), Rr=_pairing(self.r, self.tQP),
            lP=self.P.left_act, rP=self.P.right_act,
            lQ=self.Q.left_act, rQ=self.Q.right_act, p=p,
        )

    def check_maps(self):
        """Problems with r and l as T-bilinear isomorphisms (empty if fine)."""
        T = regular(self.ring)
        out = []
        for name, f, tp in (("r", self.r, self.tQP), ("l", self.l, self.tPQ)):
            if not la.is_invertible(f, self.p):
                out.append(f"{name} is not invertible")
            elif not is_hom(tp.module, T, f, "bilinear"):
                out.append(f"{name} is not bilinear")
        return out

    def morita(self):
        """(first, second) associativity conditions as booleans."""
        t = self.tensors()
        p = t["p"]
        m1l = np.einsum("aij,aok->oijk", t["L"], t["lP"]) % p
        m1r = np.einsum("bjk,boi->oijk", t["Rr"], t["rP"]) % p
        m2l = np.einsum("bji,boc->ojic", t["Rr"], t["lQ"]) % p
        m2r = np.einsum("aic,aoj->ojic", t["L"], t["rQ"]) % p
        return np.array_equal(m1l, m1r), np.array_equal(m2l, m2r)

    def coherence(self):
        """The two five-fold identities, evaluated on all basis tuples."""
        t = self.tensors()
        p = t["p"]
        L, Rr = t["L"], t["Rr"]
        # P Q P Q P -> P:  p r(q l(p' q') (x) p'')  vs  l(p (x) r(q p') q') p''
        A = np.einsum("axy,akj->kjxy", L, t["rQ"]) % p
        B = np.einsum("kjxy,bkz->bjxyz", A, Rr) % p
        lhs1 = np.einsum("bjxyz,boi->oijxyz", B, t["rP"]) % p
        C = np.einsum("bjx,bky->kjxy", Rr, t["lQ"]) % p
        D = np.einsum("aik,kjxy->aijxy", L, C) % p
        rhs1 = np.einsum("aijxy,aoz->oijxyz", D, t["lP"]) % p
        # Q P Q P Q -> Q:  r(q (x) l(p q') p') q''  vs  r(q p) q' l(p' q'')
        E = np.einsum("aik,aoy->oiky", L, t["lP"]) % p           # l(p_i q_k) p_y -> o
        F = np.einsum("bjo,oiky->bjiky", Rr, E) % p
        lhs2 = np.einsum("bjiky,boz->ojikyz", F, t["lQ"]) % p
        G = np.einsum("bji,bok->ojik", Rr, t["lQ"]) % p          # r(q_j p_i) q_k -> o
        H = np.einsum("ayz,aoc->cyzo", L, t["rQ"]) % p           # q_c l(p_y q_z) -> o
        rhs2 = np.einsum("ojik,oyzw->wjikyz", G, H) % p
        return np.array_equal(lhs1, rhs1), np.array_equal(lhs2, rhs2)

    def normalize(self):
        """Replace l by c o l, c an automorphism of T, so that the pair is
        associative; then assert both coherence identities."""
        problems = self.check_maps()
        if problems:
            raise WitnessInvalid("; ".join(problems))
        p = self.p
        T = regular(self.ring)
        C = hom_basis(T, T, "bilinear")
        t = self.tensors()
        # sum_k c_k [ (C_k l)(p q) p' ] = p r(q p')
        cols = []
        for Ck in C:
            Lk = np.einsum("ab,bij->aij", Ck, t["L"]) % p
            cols.append((np.einsum("aij,aok->oijk", Lk, t["lP"]) % p).reshape(-1))
        target = (np.einsum("bjk,boi->oijk", t["Rr"], t["rP"]) % p).reshape(-1)
        if not cols:
            raise WitnessInvalid("ring has no bilinear endomorphisms")
        M = np.stack(cols, axis=1)
        c0 = la.solve(M, target, p)
        if c0 is None:
            raise WitnessInvalid("no rescaling of l makes the pair associative")
        ker = la.kernel(M, p)
        cands = [combine(C, c0, p)]
        if ker.dim:
            cands = [combine(C, (c0 + combine(ker.matrix, k, p)) % p, p)
                     for k in np.ndindex(*([p] * ker.dim))]
        c = next((x for x in cands if la.is_invertible(x, p)), None)
        if c is None:
            raise WitnessInvalid("rescaling automorphism not found")
        out = replace(self, l=c @ self.l % p, normalized=True)
        m1, m2 = out.morita()
        if not (m1 and m2):
            raise WitnessInvalid("pair not associative after rescaling (second condition)")
        lr1, lr2 = out.coherence()
        if not (lr1 and lr2):
            raise WitnessInvalid("coherence identities fail after normalization")
        return out

    def product(self, other):
        """Witness for P (x) P' with inverse Q' (x) Q."""
        p = self.p
        T = self.ring
        PP = tensor_over(T, self.P, other.P)
        QQ = tensor_over(T, other.Q, self.Q)
        tPQ = tensor_over(T, PP.module, QQ.module)
        tQP = tensor_over(T, QQ.module, PP.module)
        a = PP.lifted()       # [i, i', u]
        b = QQ.lifted()       # [j', j, v]
        s, s2 = self.tensors(), other.tensors()
        # l((p p') (q' q)) = l(p l'(p' q') (x) q)
        inner = np.einsum("bxy,bki->kixy", s2["L"], s["rP"]) % p         # p_i . l'(p'_x q'_y) -> k
        Lf = np.einsum("kixy,akj->aixyj", inner, s["L"]) % p
        Lf = np.einsum("aixyj,ixu,yjv->auv", Lf, a, b) % p
        lprod = Lf.reshape(T.dim, -1) @ tPQ.section % p
        # r((q' q)(p p')) = r'(q' r(q p) (x) p')
        inner = np.einsum("bji,bky->kyji", s["Rr"], s2["rQ"]) % p        # q'_y . r(q_j p_i) -> k
        Rf = np.einsum("kyji,akx->ayjix", inner, s2["Rr"]) % p
        Rf = np.einsum("ayjix,yjv,ixu->avu", Rf, b, a) % p
        rprod = Rf.reshape(T.dim, -1) @ tQP.section % p
        return PicardPair(T, PP.module, QQ.module, rprod, lprod, tQP, tPQ)


def picard_pair_verify(pair):
    """Normalized, fully checked copy of the pair (raises WitnessInvalid)."""
    return pair if pair.normalized else pair.normalize()


def trivial_pair(ring):
    T = regular(ring)
    tp = tensor_over(ring, T, T)
    mult = _mult_map(tp, ring)
    return PicardPair(ring, T, T, mult, mult, tp, tp).normalize()


def _mult_map(tp, ring):
    """T (x) T -> T by multiplication, for T regular."""
    a = ring.algebra
    p = ring.p
    B = ring.basis
    F = np.zeros((ring.dim, ring.dim * ring.dim), dtype=np.int64)
    for i in range(ring.dim):
        for j in range(ring.dim):
            F[:, i * ring.dim + j] = ring.coords(a.product(B[i], B[j]))
    return F @ tp.section % p


def twist_pair(Sring, Sphi, Sphi_inv, phi, phi_inv):
    """Witness for S_phi with inverse S_{phi^-1}:
    r(a (x) b) = a phi^-1(b),  l(a (x) b) = a phi(b)."""
    a = Sring.algebra
    p = a.p
    n = a.dim
    tQP = tensor_over(Sring, Sphi_inv, Sphi)
    tPQ = tensor_over(Sring, Sphi, Sphi_inv)
    Fr = np.zeros((n, n * n), dtype=np.int64)
    Fl = np.zeros((n, n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            Fr[:, i * n + j] = a.product(a.basis_vector(i), phi_inv[:, j])
            Fl[:, i * n + j] = a.product(a.basis_vector(i), phi[:, j])
    return PicardPair(Sring, Sphi, Sphi_inv, Fr @ tQP.section % p, Fl @ tPQ.section % p, tQP, tPQ)


def generic_pair(P):
    """Search for a witness with Q = Hom_T(P, T) T and r = evaluation.

    Returns None when P is not invertible in this sense.
    """
    T = P.right
    if P.left != T:
        return None
    p = P.p
    Treg = regular(T)
    H = HomModule(P, Treg)
    Q = H.module
    Q.name = f"{P.name}*"
    tQP = tensor_over(T, Q, P)
    F = np.zeros((T.dim, Q.dim * P.dim), dtype=np.int64)
    for j in range(Q.dim):
        for i in range(P.dim):
            F[:, j * P.dim + i] = H.maps[j][:, i]
    r = F @ tQP.section % p
    if not la.is_invertible(r, p):
        return None
    tPQ = tensor_over(T, P, Q)
    l = iso_search(tPQ.module, Treg, "bilinear")
    if l is None:
        return None
    try:
        return PicardPair(T, P, Q, r, l.mat, tQP, tPQ).normalize()
    except WitnessInvalid:
        return None


@dataclass(eq=False)
class Theta:
    """Theta_N : N (x)_T Q -> Hom_T(P, N) T for a Picard pair (P, Q)."""

    pair: PicardPair
    N: object
    tNQ: object
    hom: HomModule
    mat: np.ndarray       # hom.dim x tNQ.dim

    def is_bijective(self):
        return la.is_invertible(self.mat, self.pair.p)

    def apply(self, v):
        """The map P -> N attached to an element of N (x) Q."""
        return self.hom.as_map(self.mat @ np.asarray(v) % self.pair.p)


def _module_unit(T, N, Q, k, j):
    """First local unit e with n_k e = n_k and e q_j = q_j."""
    p = T.p
    for u in T.local_units:
        if np.array_equal(N.ract(u)[:, k] % p, np.eye(N.dim, dtype=np.int64)[:, k]) and \
                np.array_equal(Q.lact(u)[:, j] % p, np.eye(Q.dim, dtype=np.int64)[:, j]):
            return u
    raise WitnessInvalid("no common local unit for a basis pair")


def theta(pair, N):
    """Build Theta_N from the five-step composite on basis elements."""
    pair = picard_pair_verify(pair)
    T, P, Q, p = pair.ring, pair.P, pair.Q, pair.p
    N = restrict(N, right=T)
    tNQ = tensor_over(T, N, Q)
    hom = HomModule(P, N)
    t = pair.tensors()
    rinv = la.inverse(pair.r, p)
    lifted = pair.tQP.lifted()   # [j2, i2, u]
    F = np.zeros((hom.dim, N.dim * Q.dim), dtype=np.int64)
    for k in range(N.dim):
        for j in range(Q.dim):
            e = _module_unit(T, N, Q, k, j)
            c = np.einsum("jiu,u->ji", lifted, rinv @ T.coords(e) % p) % p  # r^-1(e) in Q (x)_F P
            # w = sum c[j2, i2] q_j2 . l(p_i2 (x) q_j)
            w = np.einsum("ji,ai,akj->k", c, t["L"][:, :, j], t["rQ"]) % p
            y = np.einsum("k,bki->bi", w, t["Rr"]) % p            # r(w (x) p_i)
            f = np.einsum("bi,bo->oi", y, N.right_act[:, :, k]) % p  # n_k . y
            F[:, k * Q.dim + j] = hom.coords(f)
    # must vanish on the balancing relations
    if np.any(F @ (np.eye(F.shape[1], dtype=np.int64) - tNQ.section @ tNQ.proj) % p):
        raise WitnessInvalid("Theta is not balanced")
    return Theta(pair, N, tNQ, hom, F @ tNQ.section % p)


# Invertible subbimodules of S ------------------------------------------------

def span_product(S, X, Y):
    a = S
    vecs = [a.product(x, y) for x in X.matrix for y in Y.matrix]
    return la.Subspace.span(np.array(vecs).reshape(-1, a.dim), a.p, a.dim)


def subbimodule(ext, X, name="X"):
    """The R-subbimodule X of S (a Subspace) as a Bimodule over (R, R)."""
    SR = restrict(regular(ext.Sring), ext.R, ext.R)
    return submodule(SR, X, name)


@dataclass(eq=False)
class MultMaps:
    m_l: np.ndarray     # S (x)_R X -> S
    m_r: np.ndarray     # X (x)_R S -> S
    varsigma: np.ndarray  # R -> X (x)_R Y
    tSX: object
    tXS: object
    tXY: object


def mult_maps(ext, X, Y):
    """m_l, m_r and varsigma for X in Inv(R in S) with inverse Y."""
    S, R, p = ext.S, ext.R, ext.p
    if span_product(S, X, Y) != ext.R_space or span_product(S, Y, X) != ext.R_space:
        raise NotInvertiblePair("X Y and Y X must both equal R")
    Sreg = regular(ext.Sring)
    Xm, Ym = subbimodule(ext, X, "X"), subbimodule(ext, Y, "Y")
    SX = tensor_over(R, restrict(Sreg, right=R), Xm)
    XS = tensor_over(R, Xm, restrict(Sreg, left=R))
    XY = tensor_over(R, Xm, Ym)
    n, dx = S.dim, X.dim
    Fl = np.zeros((n, n * dx), dtype=np.int64)
    Fr = np.zeros((n, dx * n), dtype=np.int64)
    for i in range(n):
        for j, x in enumerate(X.matrix):
            Fl[:, i * dx + j] = S.product(S.basis_vector(i), x)
            Fr[:, j * n + i] = S.product(x, S.basis_vector(i))
    m_l = Fl @ SX.section % p
    m_r = Fr @ XS.section % p
    # varsigma(r): write r = sum c_ij x_i y_j and send it to sum c_ij x_i (x) y_j
    prods = np.array([S.product(x, y) for x in X.matrix for y in Y.matrix]).reshape(-1, n).T
    vs = np.zeros((XY.dim, R.dim), dtype=np.int64)
    for a, r in enumerate(R.basis):
        c = la.solve(prods, r, p)
        vs[:, a] = XY.proj @ c % p
    for name, f in (("m_l", m_l), ("m_r", m_r), ("varsigma", vs)):
        if not la.is_invertible(f, p):
            raise NotInvertiblePair(f"{name} is not invertible")
    return MultMaps(m_l, m_r, vs, SX, XS, XY)


def m_r_inverse_via_unit(ext, X, Y, s, e, tXS):
    """m_r^-1(s) = sum x_(e) (x) y_(e) s, where e = sum x_(e) y_(e)."""
    S, p = ext.S, ext.p
    prods = np.array([S.product(x, y) for x in X.matrix for y in Y.matrix]).reshape(-1, S.dim).T
    c = la.solve(prods, e, p).reshape(X.dim, Y.dim)
    out = np.zeros(tXS.dim, dtype=np.int64)
    for i in range(X.dim):
        for j, y in enumerate(Y.matrix):
            if c[i, j]:
                xi = np.zeros(X.dim, dtype=np.int64)
                xi[i] = 1
                out = (out + c[i, j] * tXS.elem(xi, S.product(y, s))) % p
    return out


def inv_pair(ext, X, Y):
    """Witness (X, Y, multiplication maps) over R for X in Inv with inverse Y."""
    R, S, p = ext.R, ext.S, ext.p
    Xm, Ym = subbimodule(ext, X, "X"), subbimodule(ext, Y, "Y")
    tXY = tensor_over(R, Xm, Ym)
    tYX = tensor_over(R, Ym, Xm)

    def mult(tp, A, B):
        F = np.zeros((R.dim, A.dim * B.dim), dtype=np.int64)
        for i, x in enumerate(A.matrix):
            for j, y in enumerate(B.matrix):
                F[:, i * B.dim + j] = R.coords(S.product(x, y))
        return F @ tp.section % p

    return PicardPair(R, Xm, Ym, mult(tYX, Y, X), mult(tXY, X, Y), tYX, tXY).normalize()


def unit_choices(ext, s):
    return units_for(ext.S, [s])


__all__ = ["PicardPair", "picard_pair_verify", "trivial_pair", "twist_pair", "generic_pair",
           "Theta", "theta", "mult_maps", "inv_pair", "subbimodule", "unit_for"]
