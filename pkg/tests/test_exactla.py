import numpy as np
import pytest
from hypothesis import given, strategies as st

from picardseq import exactla as la
from picardseq.errors import DimensionMismatch
from picardseq.exactla import Subspace, quotient_with_section

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def test_rref_small_example():
    red, piv = la.rref([[1, 1], [1, 0]], 2)
    assert piv == [0, 1]
    assert red.tolist() == [[1, 0], [0, 1]]


def test_rank_mod_p_differs_from_rational():
    m = [[1, 1], [1, 4]]
    assert la.rank(m, 3) == 1
    assert la.rank(m, 5) == 2


def test_inverse_of_singular_raises():
    with pytest.raises(np.linalg.LinAlgError):
        la.inverse([[1, 2], [2, 4]], 5)


def test_inverse_needs_square():
    with pytest.raises(DimensionMismatch):
        la.inverse(np.ones((2, 3), dtype=np.int64), 2)


def test_solve_none_when_inconsistent():
    assert la.solve([[1, 0], [1, 0]], [0, 1], 2) is None


def test_check_prime():
    la.check_prime(97)
    for bad in (1, 4, 101):
        with pytest.raises(ValueError):
            la.check_prime(bad)


def test_subspace_key_is_canonical():
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 2, 3)
    b = Subspace.span([[1, 0, 1], [1, 1, 0], [0, 1, 1]], 2, 3)
    assert a == b and a.key == b.key and a.dim == 2


def test_subspace_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace.full(2, 2) + Subspace.full(2, 3)


def test_first_invertible_scan_order():
    basis = [np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]])]
    # (1, 1) is the first invertible combination in lexicographic order
    assert list(la.first_invertible(basis, 3)) == [1, 1]
    assert la.first_invertible([np.array([[1, 0], [0, 0]])], 3) is None


@given(matrices())
def test_rref_idempotent_and_rank(pm):
    p, m = pm
    red, piv = la.rref(m, p)
    again, piv2 = la.rref(red, p)
    assert np.array_equal(red, again) and piv == piv2
    assert len(piv) <= min(m.shape)


@given(matrices())
def test_rank_nullity(pm):
    p, m = pm
    assert la.rank(m, p) + la.kernel(m, p).dim == m.shape[1]
    assert la.image(m, p).dim == la.rank(m, p)


@given(matrices())
def test_kernel_vectors_are_killed(pm):
    p, m = pm
    K = la.kernel(m, p)
    assert not np.any(m @ K.matrix.T % p)


@given(matrices(4, 4))
def test_inverse_roundtrip(pm):
    p, m = pm
    if m.shape[0] != m.shape[1] or not la.is_invertible(m, p):
        return
    inv = la.inverse(m, p)
    assert np.array_equal(m @ inv % p, np.eye(m.shape[0], dtype=np.int64))


@given(matrices(), st.data())
def test_solve_consistent(pm, data):
    p, m = pm
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = m @ x % p
    y = la.solve(m, b, p)
    assert y is not None and np.array_equal(m @ y % p, b)


@given(matrices())
def test_quotient_section(pm):
    p, m = pm
    sub = la.image(m, p)
    q, proj, sec = quotient_with_section(sub)
    assert q == sub.ambient_dim - sub.dim
    assert np.array_equal(proj @ sec % p, np.eye(q, dtype=np.int64))
    assert not np.any(proj @ sub.matrix.T % p)


@given(matrices(), matrices())
def test_intersection_inside_both(a, b):
    p, m = a
    _, n = b
    n = n % p
    if m.shape[0] != n.shape[0]:
        return
    U, W = la.image(m, p), la.image(n, p)
    I = U.intersect(W)
    assert I <= U and I <= W
    assert I.dim == U.dim + W.dim - (U + W).dim
