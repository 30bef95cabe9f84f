"""Brute-force reference computations, independent of the package.

Everything here works on tuples and frozensets of vectors: subspaces are
the sets of all their elements, maps are tuples of images of the standard
basis.  Only the raw fixture JSON is read; no package code is imported
except to locate the bundled files.
"""
import json
from functools import lru_cache
from itertools import product
from pathlib import Path

import picardseq

FIXTURE_DIR = Path(picardseq.__file__).parent / "fixtures"


class Alg:
    def __init__(self, data):
        self.p = data["p"]
        self.n = data["S"]["dim"]
        self.mul = {}
        for i, j, k, c in data["S"]["mul"]:
            self.mul.setdefault((i, j), []).append((k, c))
        self.units = [tuple(u) for u in data["local_units"]]
        self.R_gens = [tuple(v) for v in data["R"]]
        self.zero = (0,) * self.n
        self.elements = list(product(range(self.p), repeat=self.n))
        self.R = span(self, self.R_gens)
        one = [u for u in self.units if all(self.prod(u, b) == b == self.prod(b, u) for b in self.basis())]
        self.one = one[0] if one else None

    def basis(self):
        return [tuple(int(i == j) for j in range(self.n)) for i in range(self.n)]

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def scale(self, c, x):
        return tuple(c * a % self.p for a in x)

    def prod(self, x, y):
        out = [0] * self.n
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self.mul.get((i, j), ()):
                    out[k] = (out[k] + a * b * c) % self.p
        return tuple(out)

    def is_unit(self, u):
        return any(self.prod(u, v) == self.one == self.prod(v, u) for v in self.elements)

    def inverse(self, u):
        return next(v for v in self.elements if self.prod(u, v) == self.one == self.prod(v, u))


def load(name):
    path = FIXTURE_DIR / f"{name.replace('-', '_')}.json"
    return Alg(json.loads(path.read_text()))


def span(alg, vecs):
    out = {alg.zero}
    for v in vecs:
        new = set(out)
        for c in range(1, alg.p):
            cv = alg.scale(c, v)
            new |= {alg.add(w, cv) for w in out}
        out = new
    return frozenset(out)


def all_subspaces(alg):
    seen = {frozenset({alg.zero})}
    frontier = list(seen)
    while frontier:
        nxt = []
        for W in frontier:
            for v in alg.elements:
                if v in W:
                    continue
                V = span(alg, list(W) + [v])
                if V not in seen:
                    seen.add(V)
                    nxt.append(V)
        frontier = nxt
    return seen


def product_span(alg, X, Y):
    return span(alg, {alg.prod(x, y) for x in X for y in Y})


def r_stable(alg, W):
    return all(alg.prod(r, w) in W and alg.prod(w, r) in W for r in alg.R for w in W)


def unital(alg, W):
    return span(alg, {alg.prod(u, w) for u in alg.units for w in W}) == W == \
        span(alg, {alg.prod(w, u) for u in alg.units for w in W})


@lru_cache(maxsize=None)
def inv_pairs(name):
    """All (X, Y) with X Y = Y X = R over all pairs of subspaces."""
    alg = load(name)
    subs = [W for W in all_subspaces(alg) if r_stable(alg, W) and unital(alg, W)]
    return [(X, Y) for X in subs for Y in subs
            if product_span(alg, X, Y) == alg.R and product_span(alg, Y, X) == alg.R]


def inv_elements(name):
    return {X for X, _ in inv_pairs(name)}


# maps are stored as tuples of images of the standard basis vectors

def apply(alg, m, v):
    out = alg.zero
    for c, img in zip(v, m):
        if c:
            out = alg.add(out, alg.scale(c, img))
    return out


def right_mult(alg, u):
    return tuple(alg.prod(b, u) for b in alg.basis())


@lru_cache(maxsize=None)
def aut_sr(name):
    """S-R-bilinear bijections S -> S.  A left S-linear map of a unital
    algebra is right multiplication by the image of 1; scan all u."""
    alg = load(name)
    out = set()
    for u in alg.elements:
        m = right_mult(alg, u)
        if len({apply(alg, m, v) for v in alg.elements}) != len(alg.elements):
            continue
        if all(alg.prod(alg.prod(s, r), u) == alg.prod(alg.prod(s, u), r)
               for s in alg.basis() for r in alg.R):
            out.add(m)
    return out


def _complement(alg):
    """R generators extended by standard basis vectors to a basis of S."""
    chosen = list(alg.R_gens)
    free = []
    W = span(alg, chosen)
    for b in alg.basis():
        if b not in W:
            free.append(b)
            W = span(alg, chosen + free)
    return chosen, free


@lru_cache(maxsize=None)
def aut_rrings(name):
    """Ring automorphisms fixing R: images of a complement of R are scanned."""
    alg = load(name)
    fixed, free = _complement(alg)
    B = fixed + free
    coeffs = list(product(range(alg.p), repeat=len(B)))
    out = set()
    for imgs in product(alg.elements, repeat=len(free)):
        images = fixed + list(imgs)
        table = {}
        for c in coeffs:
            src, dst = alg.zero, alg.zero
            for a, b, t in zip(c, B, images):
                src = alg.add(src, alg.scale(a, b))
                dst = alg.add(dst, alg.scale(a, t))
            table[src] = dst
        if len(set(table.values())) != len(alg.elements):
            continue
        if all(table[alg.prod(x, y)] == alg.prod(table[x], table[y]) for x in B for y in B):
            out.add(tuple(table[b] for b in alg.basis()))
    return out


def _u_of(alg, m):
    """u with m = right multiplication by u (the image of 1)."""
    return apply(alg, m, alg.one)


@lru_cache(maxsize=None)
def ker_hat(name):
    """lambda = right mult by u with u^-1 s u = s for all s."""
    alg = load(name)
    out = set()
    for m in aut_sr(name):
        u = _u_of(alg, m)
        ui = alg.inverse(u)
        if all(alg.prod(alg.prod(ui, s), u) == s for s in alg.basis()):
            out.add(m)
    return out


@lru_cache(maxsize=None)
def ker_D(name):
    """lambda^-1(R) = R, i.e. R u^-1 = R."""
    alg = load(name)
    out = set()
    for m in aut_sr(name):
        ui = alg.inverse(_u_of(alg, m))
        if frozenset(alg.prod(r, ui) for r in alg.R) == alg.R:
            out.add(m)
    return out


def corner_center_units(alg, ring, e):
    corner = {alg.prod(alg.prod(e, x), e) for x in ring}
    center = [z for z in corner if all(alg.prod(z, y) == alg.prod(y, z) for y in corner)]
    return {z for z in center if any(alg.prod(z, w) == e == alg.prod(w, z) for w in corner)}


def bimodule_iso_to_R(alg, X):
    """Is there an R-bilinear bijection R -> X?  Scan images of R generators."""
    if len(X) != len(alg.R):
        return False
    gens = list(alg.R_gens)
    Rc = list(product(range(alg.p), repeat=len(gens)))
    for imgs in product(sorted(X), repeat=len(gens)):
        f = {}
        for c in Rc:
            src, dst = alg.zero, alg.zero
            for a, g, t in zip(c, gens, imgs):
                src = alg.add(src, alg.scale(a, g))
                dst = alg.add(dst, alg.scale(a, t))
            f[src] = dst
        if len(set(f.values())) != len(X) or len(f) != len(X):
            continue
        if all(f[alg.prod(r, s)] == alg.prod(r, f[s]) and f[alg.prod(s, r)] == alg.prod(f[s], r)
               for r in gens for s in gens):
            return True
    return False


@lru_cache(maxsize=None)
def trivial_twists(name):
    """phi with S_phi ~ S: exactly the inner ones, phi(t) = u^-1 t u."""
    alg = load(name)
    units = [u for u in alg.elements if alg.is_unit(u)]
    out = set()
    for phi in aut_rrings(name):
        for u in units:
            ui = alg.inverse(u)
            if all(alg.prod(alg.prod(ui, b), u) == img for b, img in zip(alg.basis(), phi)):
                out.add(phi)
                break
    return out


@lru_cache(maxsize=None)
def dprime_trivial(name):
    """X with (X in S) ~ (R in S): some central unit z has X z = R."""
    alg = load(name)
    central = [z for z in alg.elements if alg.is_unit(z)
               and all(alg.prod(z, b) == alg.prod(b, z) for b in alg.basis())]
    return {X for X in inv_elements(name)
            if any(frozenset(alg.prod(x, z) for x in X) == alg.R for z in central)}
