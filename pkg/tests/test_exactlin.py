import pytest
import sympy
from hypothesis import given, strategies as st

from haw.exactlin import (
    Matrix, Subspace, ShapeError, annihilator, contains, image, intersect, inverse,
    is_subspace, left_nullspace, nullspace, rank, rref, screened_rank, solve,
    subspace_sum,
)
from haw.fields import QI, Q, GaussianRational, prime_field, screening_field

from helpers import matrices, subspaces, screen


def sympy_rank(M: Matrix) -> int:
    return sympy.Matrix([[sympy.Rational(int(x.numerator), int(x.denominator)) for x in r]
                         for r in M.to_dense()]).rank()


def test_rref_example():
    M = Matrix.from_dense([[1, 2], [2, 4]], Q)
    R, piv = rref(M)
    assert piv == [0]
    assert R.to_dense() == [[1, 2]]  # zero rows dropped


def test_rank_over_fp():
    M = Matrix.from_dense([[1, 2], [3, 4]], prime_field(2))
    assert rank(M) == 1


def test_nullspace_and_solve():
    M = Matrix.from_dense([[1, 1, 0], [0, 1, 1]], Q)
    K = nullspace(M)
    assert K.dim == 1
    assert M.apply(K.basis[0]) == {}
    x, ker = solve(M, {0: 1, 1: 2})
    assert M.apply(x) == {0: 1, 1: 2}
    assert ker == K
    assert solve(Matrix.from_dense([[1], [1]], Q), {0: 1, 1: 1})[0] == {0: 1}
    assert solve(Matrix.from_dense([[1], [1]], Q), {0: 1})[0] is None
    assert solve(Matrix.from_dense([[0], [0]], Q), {0: 1})[0] is None


def test_inverse_singular():
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix.from_dense([[1, 2], [2, 4]], Q))


def test_shape_error():
    with pytest.raises(ShapeError):
        Matrix.identity(2, Q) @ Matrix.identity(3, Q)


def test_gaussian_rank():
    i = GaussianRational(0, 1)
    M = Matrix.from_dense([[1, i], [i, -1]], QI)
    assert rank(M) == 1


@given(matrices(4, 5))
def test_rank_matches_sympy(M):
    assert rank(M) == sympy_rank(M)


@given(matrices(4, 6))
def test_rank_nullity(M):
    assert rank(M) + nullspace(M).dim == M.ncols
    assert rank(M) + left_nullspace(M).dim == M.nrows
    assert rank(M.transpose()) == rank(M)


@given(matrices(5, 5))
def test_screened_rank_is_lower_bound(M):
    r = screened_rank(M)
    assert r is not None and r <= rank(M)
    assert rank(M, screen=True) == rank(M)


@given(subspaces(6, max_vectors=4), subspaces(6, max_vectors=4))
def test_modular_law_over_q(S1, S2):
    assert subspace_sum(S1, S2).dim + intersect(S1, S2).dim == S1.dim + S2.dim


@given(subspaces(6, max_vectors=4), subspaces(6, max_vectors=4))
def test_intersection_contained_in_both(S1, S2):
    T = intersect(S1, S2)
    assert is_subspace(T, S1) and is_subspace(T, S2)
    assert is_subspace(S1, subspace_sum(S1, S2))


@given(subspaces(5, max_vectors=3))
def test_annihilator_dimension(S):
    A = annihilator(S)
    assert A.dim + S.dim == 5
    for a in A.basis:
        for s in S.basis:
            assert sum(x * s.get(j, 0) for j, x in a.items()) == 0


@given(subspaces(5, max_vectors=5))
def test_rref_is_canonical(S):
    # re-spanning the basis in reverse order gives the identical RREF
    assert Subspace.span(list(reversed(S.basis)), 5, Q) == S


@given(matrices(3, 4))
def test_image_membership(M):
    Im = image(M)
    for j in range(M.ncols):
        col = {i: M[i, j] for i in range(M.nrows) if M[i, j]}
        assert contains(Im, col)


def test_change_field_matches_screen():
    M = Matrix.from_dense([[1, 2], [3, 4]], Q)
    assert screen(M).field == screening_field(Q)
    assert rank(screen(M)) == 2
