"""Sparse exact linear algebra: RREF, rank, nullspaces and the subspace lattice.

Vectors are ``dict[int, scalar]`` with no stored zeros.  Matrices are lists of
such row dicts.  A :class:`Subspace` keeps its basis in reduced row-echelon
form, which is unique, so two subspaces are equal iff their bases are.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .fields import Field, FieldMismatchError, screening_field


class ShapeError(ValueError):
    pass


def _check_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatchError(f"operands live over {a} and {b}")


class Matrix:
    """Sparse row-major matrix over an exact field."""

    __slots__ = ("nrows", "ncols", "field", "rows")

    def __init__(self, nrows: int, ncols: int, field: Field, rows=None, *, trusted=False):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if rows is None:
            rows = [{} for _ in range(nrows)]
        elif not trusted:
            rows = [_clean_row(r, ncols, field) for r in rows]
            if len(rows) != nrows:
                raise ShapeError(f"expected {nrows} rows, got {len(rows)}")
        self.rows = rows

    @classmethod
    def from_dense(cls, data, field: Field) -> "Matrix":
        data = [list(r) for r in data]
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ShapeError("ragged dense matrix")
        rows = [{j: x for j, x in enumerate(r)} for r in data]
        return cls(len(data), ncols, field, rows)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        one = field.one
        return cls(n, n, field, [{i: one} for i in range(n)], trusted=True)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> "Matrix":
        return cls(nrows, ncols, field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, self.field.zero)

    def entries(self):
        for i, r in enumerate(self.rows):
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self):
        z = self.field.zero
        return [[r.get(j, z) for j in range(self.ncols)] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self.rows == other.rows)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field}, nnz={self.nnz()})"

    def is_zero(self) -> bool:
        return not any(self.rows)

    def transpose(self) -> "Matrix":
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                cols[j][i] = x
        return Matrix(self.ncols, self.nrows, self.field, cols, trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.modulus
        brows = other.rows
        out = []
        for r in self.rows:
            acc: dict = {}
            for k, x in r.items():
                for j, y in brows[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            if p:
                out.append({j: v % p for j, v in acc.items() if v % p})
            else:
                out.append({j: v for j, v in acc.items() if v})
        return Matrix(self.nrows, other.ncols, self.field, out, trusted=True)

    def apply(self, v: dict) -> dict:
        """Matrix-vector product on a sparse column vector."""
        p = self.field.modulus
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y is not None:
                    s = s + x * y
            if p:
                s %= p
            if s:
                out[i] = s
        return out

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        rows = [{j: f.norm(c * x) for j, x in r.items()} for r in self.rows]
        return Matrix(self.nrows, self.ncols, f, [{j: x for j, x in r.items() if x} for r in rows],
                      trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_field(self.field, other.field)
        if self.shape != other.shape:
            raise ShapeError("shape mismatch")
        f = self.field
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for j, y in b.items():
                v = f.norm(r.get(j, 0) - y)
                if v:
                    r[j] = v
                else:
                    r.pop(j, None)
            rows.append(r)
        return Matrix(self.nrows, self.ncols, f, rows, trusted=True)

    def change_field(self, target: Field) -> "Matrix":
        """Image under the canonical map into ``target`` (e.g. reduction mod p)."""
        co = target.coerce
        rows = []
        for r in self.rows:
            nr = {}
            for j, x in r.items():
                y = co(x)
                if y:
                    nr[j] = y
            rows.append(nr)
        return Matrix(self.nrows, self.ncols, target, rows, trusted=True)


def _clean_row(r, ncols: int, field: Field) -> dict:
    out = {}
    co = field.coerce
    for j, x in r.items():
        if not 0 <= j < ncols:
            raise ShapeError(f"column {j} out of range [0, {ncols})")
        y = co(x)
        if y:
            out[j] = y
    return out


class Echelon:
    """Incrementally built, always fully reduced row-echelon basis.

    Rows are keyed by pivot column; every row has a 1 at its pivot and zeros in
    every other pivot column, so reducing a vector needs a single pass.
    """

    __slots__ = ("dim", "field", "rows", "_p")

    def __init__(self, dim: int, field: Field):
        self.dim = dim
        self.field = field
        self.rows: dict[int, dict] = {}
        self._p = field.modulus

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        """Residual of ``v`` modulo the span; supported on non-pivot columns."""
        rows = self.rows
        hits = [(c, x) for c, x in v.items() if c in rows]
        if not hits:
            return v
        v = dict(v)
        p = self._p
        for c, f in hits:
            del v[c]
            for j, y in rows[c].items():
                if j == c:
                    continue
                t = v.get(j, 0) - f * y
                if p:
                    t %= p
                if t:
                    v[j] = t
                else:
                    v.pop(j, None)
        return v

    def add(self, v: dict) -> int | None:
        """Insert ``v``; return the new pivot column, or None if dependent."""
        v = self.reduce(v)
        if not v:
            return None
        c = min(v)
        p = self._p
        inv = self.field.inv(v[c])
        if p:
            v = {j: x * inv % p for j, x in v.items()}
        else:
            v = {j: x * inv for j, x in v.items()}
            v[c] = self.field.one
        for r in self.rows.values():
            f = r.get(c)
            if f is None:
                continue
            del r[c]
            for j, y in v.items():
                if j == c:
                    continue
                t = r.get(j, 0) - f * y
                if p:
                    t %= p
                if t:
                    r[j] = t
                else:
                    r.pop(j, None)
        self.rows[c] = v
        return c

    def extend(self, vectors: Iterable[dict]) -> None:
        for v in vectors:
            self.add(v)

    def freeze(self) -> "Subspace":
        pivots = tuple(sorted(self.rows))
        return Subspace(self.dim, self.field, tuple(dict(self.rows[c]) for c in pivots), pivots)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``F^ambient_dim`` with canonical RREF basis."""

    ambient_dim: int
    field: Field
    basis: tuple = ()
    pivots: tuple = ()
    _pivot_index: dict = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_pivot_index", {c: k for k, c in enumerate(self.pivots)})

    @classmethod
    def span(cls, vectors: Iterable[dict], ambient_dim: int, field: Field) -> "Subspace":
        ech = Echelon(ambient_dim, field)
        for v in vectors:
            for j in v:
                if not 0 <= j < ambient_dim:
                    raise ShapeError(f"coordinate {j} outside ambient dimension {ambient_dim}")
            ech.add({j: field.coerce(x) for j, x in v.items() if x})
        return ech.freeze()

    @classmethod
    def zero(cls, ambient_dim: int, field: Field) -> "Subspace":
        return cls(ambient_dim, field)

    @classmethod
    def full(cls, ambient_dim: int, field: Field) -> "Subspace":
        one = field.one
        return cls(ambient_dim, field, tuple({i: one} for i in range(ambient_dim)),
                   tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.field == other.field
                and self.pivots == other.pivots and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in F^{self.ambient_dim} over {self.field})"

    def echelon(self) -> Echelon:
        ech = Echelon(self.ambient_dim, self.field)
        for c, row in zip(self.pivots, self.basis):
            ech.rows[c] = dict(row)
        return ech

    def residual(self, v: dict) -> dict:
        """Reduce ``v`` against the basis; zero iff ``v`` lies in the subspace."""
        index = self._pivot_index
        hits = [(c, x) for c, x in v.items() if c in index]
        if not hits:
            return v
        v = dict(v)
        p = self.field.modulus
        basis = self.basis
        for c, f in hits:
            del v[c]
            for j, y in basis[index[c]].items():
                if j == c:
                    continue
                t = v.get(j, 0) - f * y
                if p:
                    t %= p
                if t:
                    v[j] = t
                else:
                    v.pop(j, None)
        return v

    def coordinates(self, v: dict) -> dict[int, object]:
        """Coefficients of ``v`` in the RREF basis (``v`` must lie in the span)."""
        index = self._pivot_index
        return {index[c]: x for c, x in v.items() if c in index}

    def free_columns(self) -> list[int]:
        pv = self._pivot_index
        return [j for j in range(self.ambient_dim) if j not in pv]

    def matrix(self) -> Matrix:
        return Matrix(self.dim, self.ambient_dim, self.field, [dict(r) for r in self.basis],
                      trusted=True)

    def change_field(self, target: Field) -> "Subspace":
        co = target.coerce
        return Subspace.span(({j: co(x) for j, x in r.items()} for r in self.basis),
                             self.ambient_dim, target)


# -- operations on matrices -------------------------------------------------


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Unique reduced row-echelon form and pivot columns of ``M``."""
    ech = Echelon(M.ncols, M.field)
    ech.extend(M.rows)
    S = ech.freeze()
    return Matrix(S.dim, M.ncols, M.field, [dict(r) for r in S.basis], trusted=True), list(S.pivots)


def _exact_rank(M: Matrix) -> int:
    if M.nrows > M.ncols:
        M = M.transpose()
    ech = Echelon(M.ncols, M.field)
    for r in M.rows:
        ech.add(r)
        if len(ech) == M.nrows:
            break
    return len(ech)


def rank(M: Matrix, screen: bool = False) -> int:
    """Rank of ``M``.

    With ``screen`` the matrix is first reduced modulo the screening prime;
    that rank is a lower bound for the characteristic-zero rank, so it is
    returned when it already equals ``min(nrows, ncols)``.  Otherwise the rank is
    recomputed exactly.
    """
    if screen and M.field.characteristic == 0:
        r = screened_rank(M)
        if r is not None and r == min(M.nrows, M.ncols):
            return r
    return _exact_rank(M)


def screened_rank(M: Matrix) -> int | None:
    """Rank of the image of ``M`` in the screening prime field.

    Returns ``None`` when some denominator vanishes modulo the prime.
    """
    target = screening_field(M.field)
    try:
        Mp = M.change_field(target)
    except ZeroDivisionError:
        return None
    return _exact_rank(Mp)


def nullspace(M: Matrix) -> Subspace:
    """``{v : M v = 0}`` as a subspace of ``F^ncols``."""
    R, pivots = rref(M)
    f = M.field
    p = f.modulus
    pivset = set(pivots)
    vecs = []
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = {free: f.one}
        for c, row in zip(pivots, R.rows):
            x = row.get(free)
            if x:
                v[c] = (-x) % p if p else -x
        vecs.append(v)
    return Subspace.span(vecs, M.ncols, f)


def left_nullspace(M: Matrix) -> Subspace:
    return nullspace(M.transpose())


def solve(M: Matrix, b: dict) -> tuple[dict | None, Subspace]:
    """One solution of ``M x = b`` (or None) and the homogeneous solution space."""
    f = M.field
    p = f.modulus
    n = M.ncols
    aug_rows = []
    for i, r in enumerate(M.rows):
        row = dict(r)
        bi = b.get(i)
        if bi:
            row[n] = bi
        aug_rows.append(row)
    R, pivots = rref(Matrix(M.nrows, n + 1, f, aug_rows, trusted=True))
    kernel = nullspace(M)
    if n in pivots:
        return None, kernel
    x = {}
    for c, row in zip(pivots, R.rows):
        y = row.get(n)
        if y:
            x[c] = y % p if p else y
    return x, kernel


def image(M: Matrix) -> Subspace:
    """Column space of ``M`` as a subspace of ``F^nrows``."""
    return Subspace.span(M.transpose().rows, M.nrows, M.field)


def is_invertible(M: Matrix) -> bool:
    return M.nrows == M.ncols and rank(M) == M.nrows


def inverse(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise ShapeError("inverse of a non-square matrix")
    n = M.nrows
    f = M.field
    aug = []
    for i, r in enumerate(M.rows):
        row = dict(r)
        row[n + i] = f.one
        aug.append(row)
    R, pivots = rref(Matrix(n, 2 * n, f, aug, trusted=True))
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    rows = [{j - n: x for j, x in r.items() if j >= n} for r in R.rows]
    return Matrix(n, n, f, rows, trusted=True)


# -- subspace lattice -------------------------------------------------------


def _same_ambient(S1: Subspace, S2: Subspace) -> None:
    _check_field(S1.field, S2.field)
    if S1.ambient_dim != S2.ambient_dim:
        raise ShapeError(f"ambient dimensions {S1.ambient_dim} and {S2.ambient_dim} differ")


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    _same_ambient(S1, S2)
    if S1.dim < S2.dim:
        S1, S2 = S2, S1
    ech = S1.echelon()
    ech.extend(S2.basis)
    return ech.freeze()


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    """``S1 ∩ S2`` from the linear relations among residuals of ``S1`` modulo ``S2``."""
    _same_ambient(S1, S2)
    if S1.dim > S2.dim:
        S1, S2 = S2, S1
    f = S1.field
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(S1.ambient_dim, f)
    residuals = [S2.residual(b) for b in S1.basis]
    cols = sorted({j for r in residuals for j in r})
    where = {j: k for k, j in enumerate(cols)}
    # columns of this matrix are the residual vectors; its kernel holds the
    # combinations of S1's basis that fall inside S2
    T = [{} for _ in cols]
    for i, r in enumerate(residuals):
        for j, x in r.items():
            T[where[j]][i] = x
    K = nullspace(Matrix(len(cols), S1.dim, f, T, trusted=True))
    vecs = [combine(S1.basis, a, f) for a in K.basis]
    return Subspace.span(vecs, S1.ambient_dim, f)


def combine(vectors, coeffs: dict, field: Field) -> dict:
    """``sum(coeffs[i] * vectors[i])`` as a sparse vector."""
    v: dict = {}
    for i, c in coeffs.items():
        for j, y in vectors[i].items():
            v[j] = v.get(j, 0) + c * y
    p = field.modulus
    if p:
        return {j: x % p for j, x in v.items() if x % p}
    return {j: x for j, x in v.items() if x}


def contains(S: Subspace, v: dict) -> bool:
    if any(not 0 <= j < S.ambient_dim for j in v):
        raise ShapeError("vector outside the ambient space")
    return not S.residual({j: x for j, x in v.items() if x})


def is_subspace(S1: Subspace, S2: Subspace) -> bool:
    """``S1 ⊆ S2``."""
    _same_ambient(S1, S2)
    return all(not S2.residual(b) for b in S1.basis)


def annihilator(S: Subspace) -> Subspace:
    """``{ρ : <s, ρ> = 0 for all s in S}`` under the coordinate pairing."""
    return nullspace(S.matrix())
