import pytest
from hypothesis import given, strategies as st

from haw.exactlin import Matrix, Subspace
from haw.fields import Q
from haw.tensor import (
    TensorVector, apply_slotwise, contract_first, digits, embed, index_decode,
    index_encode, kron, log_q, operator_power, rotate,
)

from helpers import matrices, subspaces


def test_index_examples():
    assert index_encode([1, 1], 2) == 0
    assert index_encode([2, 1], 2) == 2
    assert index_encode([1, 2, 3], 3) == 5
    assert index_decode(5, 3, 3) == (1, 2, 3)
    assert digits(5, 3, 3) == (0, 1, 2)
    with pytest.raises(ValueError):
        index_encode([0, 1], 2)
    with pytest.raises(ValueError):
        index_encode([3], 2)


@given(st.integers(2, 4), st.integers(1, 4), st.data())
def test_index_roundtrip(q, n, data):
    k = data.draw(st.integers(0, q ** n - 1))
    assert index_encode(index_decode(k, n, q), q) == k


def test_log_q():
    assert log_q(27, 3) == 3
    with pytest.raises(ValueError):
        log_q(10, 3)


def test_tensor_product_of_basis():
    a = TensorVector.basis(2, [1], Q)
    b = TensorVector.basis(2, [2, 1], Q)
    assert (a @ b) == TensorVector.basis(2, [1, 2, 1], Q)


@given(subspaces(4, max_vectors=3))
def test_embed_dimension(S):
    E = embed(S, 1, 1, 2)
    assert E.ambient_dim == 16
    assert E.dim == S.dim * 4


@given(subspaces(4, max_vectors=3))
def test_embed_matches_kron(S):
    # E ⊗ S via explicit Kronecker products of spanning vectors
    vecs = []
    for a in range(2):
        for v in S.basis:
            vecs.append({a * 4 + j: x for j, x in v.items()})
    assert embed(S, 1, 0, 2) == Subspace.span(vecs, 8, Q)


@given(matrices(2, 2), st.data())
def test_slotwise_matches_kron_power(L, data):
    vals = data.draw(st.lists(st.integers(-2, 2), min_size=8, max_size=8))
    v = {i: x for i, x in enumerate(vals) if x}
    v = {i: Q.coerce(x) for i, x in v.items()}
    assert apply_slotwise(L, v, 3) == operator_power(L, 3).apply(v)
    assert operator_power(L, 2) == kron(L, L)


def test_rotate_moves_last_slot_first():
    v = {index_encode([1, 2, 3], 3): Q.one}
    assert rotate(v, 3, 3, 1) == {index_encode([3, 1, 2], 3): Q.one}
    assert rotate(rotate(v, 3, 3, 1), 3, 3, -1) == v


def test_contract_first():
    W = TensorVector.from_indices(2, 2, Q, {(1, 2): 1, (2, 1): -1})
    assert contract_first(W, [1, 0]) == TensorVector.from_indices(2, 1, Q, {(2,): 1})
