import numpy as np
import pytest

from conftest import FIXTURES, ext_of
from picardseq import exactla as la
from picardseq.bimodule import (direct_sum, hom_basis, is_hom, iso_search, submodule,
                                tensor_maps, tensor_over)
from picardseq.errors import NotInvertiblePair, WitnessInvalid
from picardseq.extgroups import context
from picardseq.picard import (PicardPair, generic_pair, inv_pair, m_r_inverse_via_unit, mult_maps,
                              subbimodule, theta, trivial_pair, unit_choices)

OFFDIAG = la.Subspace.span([[0, 1, 0, 0], [0, 0, 1, 0]], 2, 4)


def offdiag_pair():
    return inv_pair(ext_of("fix-a"), OFFDIAG, OFFDIAG)


def test_mult_maps_neutral():
    ext = ext_of("fix-a")
    mm = mult_maps(ext, ext.R_space, ext.R_space)
    for f in (mm.m_l, mm.m_r, mm.varsigma):
        assert la.is_invertible(f, 2)


def test_mult_maps_offdiag():
    ext = ext_of("fix-a")
    mm = mult_maps(ext, OFFDIAG, OFFDIAG)
    assert mm.tXY.dim == 2
    for f in (mm.m_l, mm.m_r, mm.varsigma):
        assert la.is_invertible(f, 2)


def test_mult_maps_rejects_half():
    ext = ext_of("fix-a")
    E12 = la.Subspace.span([[0, 1, 0, 0]], 2, 4)
    E21 = la.Subspace.span([[0, 0, 1, 0]], 2, 4)
    with pytest.raises(NotInvertiblePair):
        mult_maps(ext, E12, E21)


@pytest.mark.parametrize("name", FIXTURES)
def test_m_r_inverse_unit_independent(name):
    ext = ext_of(name)
    ctx = context(ext)
    S, p = ext.S, ext.p
    for k in ctx.inv:
        x = ctx.inv.payload[k]
        mm = mult_maps(ext, x.X, x.Y)
        for b in range(S.dim):
            s = S.basis_vector(b)
            vals = [m_r_inverse_via_unit(ext, x.X, x.Y, s, e, mm.tXS) for e in unit_choices(ext, s)]
            assert vals
            assert all(np.array_equal(v, vals[0]) for v in vals)
            assert np.array_equal(mm.m_r @ vals[0] % p, s)


def test_trivial_pair_is_coherent():
    pair = trivial_pair(ext_of("fix-c").R)
    assert pair.normalized and pair.morita() == (True, True) and pair.coherence() == (True, True)


def test_normalize_repairs_scaled_l():
    ext = ext_of("fix-b")
    good = inv_pair(ext, ext.R_space, ext.R_space)
    bad = PicardPair(good.ring, good.P, good.Q, good.r, 2 * good.l % 3, good.tQP, good.tPQ)
    assert bad.morita() != (True, True)
    fixed = bad.normalize()
    assert fixed.morita() == (True, True)
    assert np.array_equal(fixed.l, good.l)


def test_normalize_rejects_singular():
    ext = ext_of("fix-a")
    good = inv_pair(ext, ext.R_space, ext.R_space)
    bad = PicardPair(good.ring, good.P, good.Q, np.zeros_like(good.r), good.l, good.tQP, good.tPQ)
    with pytest.raises(WitnessInvalid):
        bad.normalize()


def test_generic_pair():
    ext = ext_of("fix-a")
    ctx = context(ext)
    assert generic_pair(ctx.Rreg) is not None
    assert generic_pair(subbimodule(ext, OFFDIAG)) is not None
    assert generic_pair(direct_sum(ctx.Rreg, ctx.Rreg)) is None


def test_product_of_pairs():
    pair = offdiag_pair()
    sq = pair.product(pair).normalize()
    assert sq.morita() == (True, True)
    assert iso_search(sq.P, context(ext_of("fix-a")).Rreg) is not None


def test_theta_trivial():
    ext = ext_of("fix-c")
    ctx = context(ext)
    th = theta(ctx.R_pair, ctx.Rreg)
    assert th.is_bijective() and th.hom.dim == ext.R.dim


def test_theta_swap():
    ctx = context(ext_of("fix-a"))
    th = theta(offdiag_pair(), ctx.Rreg)
    assert th.mat.shape == (2, 2) and th.is_bijective()


def test_theta_zero():
    ext = ext_of("fix-a")
    Z = submodule(context(ext).S_SR, la.Subspace.zero(2, 4))
    th = theta(offdiag_pair(), Z)
    assert th.mat.shape == (0, 0) and th.is_bijective()


def naturality_holds(pair, N, N2, g):
    p = pair.p
    a, b = theta(pair, N), theta(pair, N2)
    gq = tensor_maps(a.tNQ, b.tNQ, g, np.eye(pair.Q.dim, dtype=np.int64))
    lhs = np.stack([b.hom.coords(g @ f % p) for f in a.hom.maps], axis=1) @ a.mat % p \
        if a.hom.dim else np.zeros((b.hom.dim, a.tNQ.dim), dtype=np.int64)
    return np.array_equal(lhs % p, b.mat @ gq % p)


@pytest.mark.parametrize("name", FIXTURES)
def test_theta_natural(name):
    ext = ext_of(name)
    ctx = context(ext)
    pairs = [ctx.R_pair] + [inv_pair(ext, ctx.inv.payload[k].X, ctx.inv.payload[k].Y)
                            for k in ctx.inv]
    for pair in pairs:
        for N in (ctx.S_SR, ctx.Rreg):
            for g in hom_basis(N, ctx.S_SR, "right"):
                assert is_hom(N, ctx.S_SR, g, "right")
                assert naturality_holds(pair, N, ctx.S_SR, g)


def test_swap_reads_other_side():
    pair = offdiag_pair()
    sw = pair.swap()
    assert sw.P is pair.Q and np.array_equal(sw.l, pair.r)
    assert sw.morita() == (True, True)


def test_tensor_of_inverse_pair_is_R():
    ext = ext_of("fix-f")
    ctx = context(ext)
    for k in ctx.inv:
        x = ctx.inv.payload[k]
        T = tensor_over(ext.R, subbimodule(ext, x.X), subbimodule(ext, x.Y))
        assert iso_search(T.module, ctx.Rreg) is not None
