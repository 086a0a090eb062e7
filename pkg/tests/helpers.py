"""Shared generators for tests."""

import random

from hypothesis import strategies as st

from haw.exactlin import Matrix, Subspace, is_invertible
from haw.fields import Q, screening_field

small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, nrows, ncols, field=Q):
    return Matrix.from_dense([[draw(small) for _ in range(ncols)] for _ in range(nrows)], field)


@st.composite
def invertible_matrices(draw, q, field=Q):
    M = draw(matrices(q, q, field))
    if not is_invertible(M):
        # shift towards an invertible matrix deterministically
        M = Matrix.from_dense(
            [[x + (q + 7 if i == j else 0) for j, x in enumerate(r)] for i, r in enumerate(M.to_dense())],
            field)
    return M


@st.composite
def subspaces(draw, ambient, field=Q, max_vectors=None):
    k = draw(st.integers(0, max_vectors if max_vectors is not None else ambient))
    vecs = []
    for _ in range(k):
        vals = [draw(small) for _ in range(ambient)]
        vecs.append({i: x for i, x in enumerate(vals) if x})
    return Subspace.span(vecs, ambient, field)


def random_matrix(rng: random.Random, nrows, ncols, field=Q, lo=-4, hi=4):
    return Matrix.from_dense([[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(nrows)], field)


def random_invertible(rng: random.Random, q, field=Q):
    while True:
        M = random_matrix(rng, q, q, field)
        if is_invertible(M):
            return M


def screen(M: Matrix) -> Matrix:
    return M.change_field(screening_field(M.field))
