import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nrblockade.errors import InvalidDimensionError, SpaceMismatchError
from nrblockade.fock import (
    HilbertSpec,
    annihilation,
    basis_index,
    commutator,
    creation,
    embed,
    identity,
    mode_operator,
    number,
    quadrature_p,
    quadrature_q,
)

dims = st.integers(min_value=2, max_value=9)


def test_annihilation_smallest_space():
    a = annihilation(2).toarray()
    assert a[0, 1] == 1
    assert np.count_nonzero(a) == 1


def test_annihilation_sqrt_entries():
    a = annihilation(4)
    assert a.toarray()[2, 3] == pytest.approx(1.7320508, abs=1e-7)
    np.testing.assert_allclose(number(4).toarray(), (a.dag() @ a).toarray(), atol=1e-15)
    np.testing.assert_array_equal(np.diag(number(4).toarray()).real, [0, 1, 2, 3])


@pytest.mark.parametrize("d", [0, 1, -3])
def test_annihilation_rejects_small_dim(d):
    with pytest.raises(InvalidDimensionError):
        annihilation(d)


def test_hilbert_spec_validation():
    assert HilbertSpec((2, 3, 4)).dim == 24
    with pytest.raises(InvalidDimensionError):
        HilbertSpec((3, 1))
    with pytest.raises(InvalidDimensionError):
        HilbertSpec(())
    with pytest.raises(InvalidDimensionError):
        HilbertSpec((2, 2), labels=("x", "x"))
    s = HilbertSpec((2, 3), labels=("a", "b"))
    assert s.index_of("b") == 1
    with pytest.raises(KeyError):
        s.index_of("c")


def test_basis_ordering_mode_zero_slowest():
    s = HilbertSpec((2, 3, 4))
    assert basis_index(s, (1, 2, 3)) == (1 * 3 + 2) * 4 + 3
    with pytest.raises(InvalidDimensionError):
        basis_index(s, (2, 0, 0))


def test_embed_acts_on_one_factor():
    s = HilbertSpec((2, 2))
    A = embed(annihilation(2), s, 0)
    ket = np.zeros(4)
    ket[basis_index(s, (1, 1))] = 1
    out = A @ ket
    expected = np.zeros(4)
    expected[basis_index(s, (0, 1))] = 1
    np.testing.assert_array_equal(out, expected)


def test_embed_disjoint_modes_commute_exactly():
    s = HilbertSpec((3, 3))
    a = embed(annihilation(3), s, 0)
    b = embed(annihilation(3), s, 1)
    assert commutator(a, b).is_zero()
    assert commutator(a, b.dag()).is_zero()


def test_pair_element_by_sparse_products():
    s = HilbertSpec((2, 3), labels=("a", "b"))
    a = mode_operator(s, "a")
    b = mode_operator(s, "b")
    op = a.dag() @ b @ b
    # independent: explicit dense Kronecker products
    ad = np.array([[0, 0], [1, 0]])
    bb = np.diag([1, np.sqrt(2)], 1)
    dense = np.kron(ad, np.eye(3)) @ np.kron(np.eye(2), bb) @ np.kron(np.eye(2), bb)
    assert op.matrix_element((1, 0), (0, 2)) == pytest.approx(np.sqrt(2), abs=1e-15)
    np.testing.assert_allclose(op.toarray(), dense, atol=1e-15)


def test_embed_errors():
    s = HilbertSpec((3, 4))
    with pytest.raises(IndexError):
        embed(annihilation(3), s, 2)
    with pytest.raises(SpaceMismatchError):
        embed(annihilation(4), s, 0)
    with pytest.raises(KeyError):
        embed(annihilation(3), s, "zz")


def test_quadratures():
    q2 = quadrature_q(2).toarray()
    np.testing.assert_allclose(q2, [[0, 1 / np.sqrt(2)], [1 / np.sqrt(2), 0]], atol=1e-16)
    for d in (2, 5):
        q = quadrature_q(d)
        assert (q @ q).toarray()[0, 0] == pytest.approx(0.5, abs=1e-15)
        assert q.is_hermitian() and quadrature_p(d).is_hermitian()


def test_canonical_commutator_below_truncation():
    c = commutator(quadrature_q(20), quadrature_p(20)).toarray()
    np.testing.assert_allclose(np.diag(c)[:18], 1j, atol=1e-12)


def test_mixing_spaces_is_an_error():
    assert annihilation(3) @ identity(HilbertSpec((3,))) == annihilation(3)
    with pytest.raises(SpaceMismatchError):
        annihilation(3) + annihilation(4)
    with pytest.raises(SpaceMismatchError):
        annihilation(3) @ annihilation(4)


def test_operator_is_immutable():
    a = annihilation(3)
    with pytest.raises(ValueError):
        a.data.data[0] = 5


def test_operator_storage_is_deterministic():
    s = HilbertSpec((3, 4))
    x = mode_operator(s, 0).dag() @ mode_operator(s, 1) @ mode_operator(s, 1)
    y = mode_operator(s, 0).dag() @ mode_operator(s, 1) @ mode_operator(s, 1)
    np.testing.assert_array_equal(x.data.indices, y.data.indices)
    np.testing.assert_array_equal(x.data.indptr, y.data.indptr)
    np.testing.assert_array_equal(x.data.data, y.data.data)


@given(dims)
def test_adjoint_of_annihilation_is_creation(d):
    assert annihilation(d).dag() == creation(d)
    assert annihilation(d).dag().dag() == annihilation(d)


@given(st.lists(dims, min_size=1, max_size=3), st.data())
def test_embed_nnz_scaling(mode_dims, data):
    s = HilbertSpec(tuple(mode_dims))
    k = data.draw(st.integers(0, len(mode_dims) - 1))
    op = annihilation(mode_dims[k])
    e = embed(op, s, k)
    others = int(np.prod([d for i, d in enumerate(mode_dims) if i != k]))
    assert e.nnz == op.nnz * others


@settings(max_examples=50)
@given(dims, st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3))
def test_hermitian_closed_under_real_combinations(d, c):
    a = annihilation(d)
    ops = [a.dag() @ a, quadrature_q(d), quadrature_p(d)]
    combo = ops[0] * c[0] + ops[1] * c[1] + ops[2] * c[2]
    assert combo.is_hermitian(atol=1e-14)
