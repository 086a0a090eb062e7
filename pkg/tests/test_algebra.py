import random

import pytest
from hypothesis import given, strategies as st

from haw.algebra import (
    Presentation, ResourceError, dual_dims, dual_slice, extract_top_form,
    free_presentation, graded_basis, graded_dim, hilbert, implied_global_dimension,
    omega_eval, position_degree, presentation_from_form, quadratic_dual_relations_check,
    relation_ideal_slice, series_expand, sigma_apply, sigma_preserves_dual_ideal,
)
from haw.exactlin import Matrix, Subspace
from haw.fields import QI, Q, prime_field
from haw.forms import is_preregular
from haw.library import (
    GENERIC_SPHERE_ANGLES, bilinear_form, sphere_form, symplectic_matrix,
    yang_mills_form,
)
from haw.tensor import TensorVector, digits

from helpers import invertible_matrices, subspaces

YM_SERIES = [1, 3, 9, 24, 64, 168, 441, 1155]


def ym_form():
    return yang_mills_form(Matrix.identity(3, Q))


def test_relation_dims():
    assert presentation_from_form(bilinear_form(symplectic_matrix(Q)), 2).R.dim == 1
    assert presentation_from_form(ym_form(), 3).R.dim == 3
    assert presentation_from_form(sphere_form(GENERIC_SPHERE_ANGLES), 2).R.dim == 6


def test_graded_dim_examples():
    P = presentation_from_form(bilinear_form(symplectic_matrix(Q)), 2)
    assert [graded_dim(P, n) for n in range(3)] == [1, 2, 3]
    assert graded_dim(free_presentation(2, 2, Q), 5) == 32


def test_symplectic_basis_is_commutative_monomials():
    P = presentation_from_form(bilinear_form(symplectic_matrix(Q)), 2)
    assert len(graded_basis(P, 4)) == 5


def test_series_oracles():
    assert list(series_expand(2, 2, "dim2", 10)) == list(range(1, 12))
    assert list(series_expand(3, 2, "dim2", 7)) == [1, 3, 8, 21, 55, 144, 377, 987]
    assert list(series_expand(3, 3, "dim3", 7)) == YM_SERIES


def test_ym_factorization_cross_check():
    # (1 - 3t + 3t^3 - t^4) = (1 - t^2)(1 - 3t + t^2)
    a = [1, 0, -1]
    b = [1, -3, 1]
    prod = [0] * 5
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    assert prod == [1, -3, 0, 3, -1]


def test_ym_hilbert():
    P = presentation_from_form(ym_form(), 3)
    assert list(hilbert(P, 7)) == YM_SERIES
    assert list(hilbert(P, 5, method="placements")) == YM_SERIES[:6]


def test_ym_hilbert_times_denominator():
    P = presentation_from_form(ym_form(), 3)
    assert hilbert(P, 7).times([1, -3, 0, 3, -1]) == [1] + [0] * 7


@given(st.sampled_from([2, 3]), st.sampled_from([2, 3]), st.data())
def test_tower_matches_placements(q, N, data):
    R = data.draw(subspaces(q ** N, max_vectors=3))
    P = Presentation(q, N, R)
    top = 4 if q == 3 else 5
    assert list(hilbert(P, top)) == list(hilbert(P, top, method="placements"))


@given(st.sampled_from([2, 3]), st.data())
def test_tower_matches_placements_mod_p(q, data):
    F = prime_field(7)
    R = data.draw(subspaces(q * q, field=F, max_vectors=3))
    P = Presentation(q, 2, R)
    assert list(hilbert(P, 4)) == list(hilbert(P, 4, method="placements"))


def test_left_and_right_multiplication_agree_on_words():
    # in the free algebra every product of standard monomials is a monomial
    P = free_presentation(2, 2, Q)
    T = P.tower
    T.ensure(3)
    for alpha, word in enumerate(T.std[2]):
        for a in range(2):
            right = T.right_mul_std(alpha, a, 2)
            assert right == {T.index[3][word + (a,)]: Q.one}


def test_dual_examples():
    P = presentation_from_form(bilinear_form(Matrix.from_dense([[2, 1], [0, 3]], Q)), 2)
    assert dual_dims(P, 5) == [1, 2, 1, 0, 0, 0]
    B1 = presentation_from_form(bilinear_form(Matrix.from_dense([[1, 0], [0, 0]], Q)), 2)
    assert dual_dims(B1, 5) == [1, 2, 1, 1, 1, 1]
    Y = presentation_from_form(ym_form(), 3)
    assert dual_dims(Y, 6) == [1, 3, 9, 3, 1, 0, 0]
    assert dual_slice(Y, 4).space == ym_form().span()
    assert dual_slice(Y, 3).space == Y.R


@given(st.sampled_from([2, 3]), st.data())
def test_dual_methods_agree(q, data):
    R = data.draw(subspaces(q ** 2, max_vectors=4))
    P = Presentation(q, 2, R)
    for n in range(5 if q == 2 else 4):
        assert dual_slice(P, n).space == dual_slice(P, n, method="placements").space


def test_relation_ideal_slice_at_N_is_R():
    P = presentation_from_form(ym_form(), 3)
    assert relation_ideal_slice(P, 3) == P.R


def test_extract():
    Y = presentation_from_form(ym_form(), 3)
    assert extract_top_form(Y, 4).span() == ym_form().span()
    B = bilinear_form(Matrix.from_dense([[1, 2], [3, 5]], Q))
    assert extract_top_form(presentation_from_form(B, 2), 2).span() == B.span()
    assert extract_top_form(free_presentation(2, 2, Q), 2) is None


def test_quadratic_dual_relations():
    assert quadratic_dual_relations_check(Matrix.identity(2, Q))
    assert quadratic_dual_relations_check(symplectic_matrix(Q))
    with pytest.raises(ValueError):
        quadratic_dual_relations_check(Matrix.from_dense([[1, 1], [1, 1]], Q))


def test_implied_global_dimension():
    assert implied_global_dimension(2, 4) == 4
    assert implied_global_dimension(3, 4) == 3
    assert implied_global_dimension(3, 7) == 5
    assert implied_global_dimension(3, 5) is None
    assert [position_degree(h, 3) for h in range(5)] == [0, 1, 3, 4, 6]


def test_omega_basis_and_degree_mismatch():
    W = ym_form()
    u = TensorVector.basis(3, [1, 2], Q)
    v = TensorVector.basis(3, [2, 1], Q)
    assert omega_eval(W, u, v) == W.component(1, 2, 2, 1)
    assert omega_eval(W, u, TensorVector.basis(3, [1], Q)) == 0


def _cyclicity_on_all_pairs(W):
    Qw = is_preregular(W).q_matrix
    q, m = W.q, W.m
    for k in range(m + 1):
        for a in range(q ** k):
            u = TensorVector.basis(q, [d + 1 for d in digits(a, k, q)], W.field) if k else \
                TensorVector(q, 0, W.field, {0: W.field.one})
            for b in range(q ** (m - k)):
                idx = [d + 1 for d in digits(b, m - k, q)]
                v = TensorVector.basis(q, idx, W.field) if idx else \
                    TensorVector(q, 0, W.field, {0: W.field.one})
                if omega_eval(W, u, v) != omega_eval(W, sigma_apply(Qw, v), u):
                    return False
    return True


def test_cyclicity_yang_mills_and_bilinear():
    assert _cyclicity_on_all_pairs(ym_form())
    assert _cyclicity_on_all_pairs(bilinear_form(Matrix.from_dense([[1, 2], [0, 1]], Q)))


def test_sigma_preserves_dual_ideal():
    assert sigma_preserves_dual_ideal(bilinear_form(Matrix.identity(2, Q)), 2)
    assert sigma_preserves_dual_ideal(bilinear_form(symplectic_matrix(Q)), 2)
    assert sigma_preserves_dual_ideal(ym_form(), 3)


def test_ceiling():
    P = presentation_from_form(ym_form(), 3, ceiling=100)
    with pytest.raises(ResourceError):
        hilbert(P, 5)
