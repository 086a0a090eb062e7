import random

import pytest
from hypothesis import given, strategies as st

from haw.exactlin import Matrix, inverse
from haw.fields import Q, prime_field
from haw.forms import (
    DomainError, MultilinearForm, cyclic_identity, derived_subspace, gl_act,
    is_preregular, is_three_regular, slot_nondegenerate, solve_cyclic_Q,
    twist_identity,
)
from haw.library import bilinear_form, symplectic_matrix, yang_mills_form
from haw.tensor import TensorVector, index_encode

from helpers import invertible_matrices, matrices


def ym():
    return yang_mills_form(Matrix.identity(3, Q))


def test_zero_form_rejected():
    with pytest.raises(ValueError):
        MultilinearForm(2, 2, Q, {})


def test_components_roundtrip():
    W = MultilinearForm.from_components(2, 3, Q, {(1, 2, 1): 3, (2, 2, 2): -1})
    assert W.component(1, 2, 1) == 3
    assert dict(W.components()) == {(1, 2, 1): 3, (2, 2, 2): -1}


def test_slot_nondegenerate_examples():
    assert slot_nondegenerate(bilinear_form(Matrix.identity(2, Q)), 0)
    B = bilinear_form(Matrix.from_dense([[1, 0], [0, 0]], Q))
    assert not slot_nondegenerate(B, 0) and not slot_nondegenerate(B, 1)
    assert all(slot_nondegenerate(ym(), p) for p in range(4))


def test_twist_examples():
    Qs, unique = solve_cyclic_Q(bilinear_form(Matrix.from_dense([[2, 1], [1, 3]], Q)))
    assert unique and Qs == Matrix.identity(2, Q)
    Qs, unique = solve_cyclic_Q(bilinear_form(symplectic_matrix(Q)))
    assert unique and Qs == Matrix.identity(2, Q).scale(-1)
    Qs, unique = solve_cyclic_Q(ym())
    assert unique and Qs == Matrix.identity(3, Q)


def test_preregular_examples():
    assert is_preregular(bilinear_form(Matrix.from_dense([[1, 2], [0, 1]], Q))).preregular
    rep = is_preregular(bilinear_form(Matrix.from_dense([[1, 2], [2, 4]], Q)))
    assert not rep.preregular and rep.notes


def test_twist_for_nonsymmetric_bilinear():
    # W(X, Y) = W(QY, X) with W(X, Y) = X^T B Y gives Q = B^{-T} B
    B = Matrix.from_dense([[1, 2], [0, 1]], Q)
    Qs, _ = solve_cyclic_Q(bilinear_form(B))
    assert Qs == inverse(B.transpose()) @ B


def test_three_regular_examples():
    rep = is_three_regular(ym(), 3)
    assert rep.three_regular and rep.pair_nullspace_dim == 1
    # decomposable f ⊗ g ⊗ h is degenerate in slot 0
    prod = MultilinearForm.from_components(2, 3, Q, {(1, 1, 1): 1})
    rep = is_three_regular(prod, 2)
    assert not rep.three_regular and not rep.preregular
    assert rep.pair_nullspace_dim >= 2
    with pytest.raises(DomainError):
        is_three_regular(ym(), 2)


def test_gl_act_examples():
    W = ym()
    assert gl_act(W, Matrix.identity(3, Q)) == W
    B = Matrix.from_dense([[1, 2], [3, 4]], Q)
    L = Matrix.from_dense([[2, 0], [0, 5]], Q)
    WL = gl_act(bilinear_form(B), L)
    ell = [2, 5]
    for (mu, nu), x in bilinear_form(B).components():
        assert WL.component(mu, nu) == x / (ell[mu - 1] * ell[nu - 1])
    with pytest.raises(ValueError):
        gl_act(W, Matrix.zeros(3, 3, Q))


def test_derived_examples():
    W = ym()
    assert derived_subspace(W, 0) == W.span()
    assert derived_subspace(W, 1).dim == 3
    assert derived_subspace(W, 3).dim == 3
    assert derived_subspace(bilinear_form(symplectic_matrix(Q)), 1).dim == 2


def test_twist_identity_over_fp():
    W = ym().change_field(prime_field(101))
    rep = is_preregular(W)
    assert rep.preregular and rep.twist_identity


@given(invertible_matrices(3), st.data())
def test_bilinear_preregular_iff_nondegenerate(B, data):
    assert is_preregular(bilinear_form(B)).preregular
    S = data.draw(matrices(3, 1))
    # rank-one forms s s^T are degenerate for q = 3
    dense = [[S[i, 0] * S[j, 0] for j in range(3)] for i in range(3)]
    if any(any(r) for r in dense):
        assert not is_preregular(bilinear_form(Matrix.from_dense(dense, Q))).preregular


@given(invertible_matrices(2), invertible_matrices(2))
def test_cyclic_identity_and_conjugation(B, L):
    W = bilinear_form(B)
    Qw, _ = solve_cyclic_Q(W)
    assert cyclic_identity(W, Qw) and twist_identity(W, Qw)
    QL, _ = solve_cyclic_Q(gl_act(W, L))
    assert QL == L @ Qw @ inverse(L)
