"""Index bookkeeping for tensor powers of ``E = K^q``.

A multi-index ``(λ1, ..., λn)`` with entries in ``1..q`` is encoded big-endian
(first slot most significant) as an offset in ``[0, q^n)``.  Everything that
builds a matrix over a tensor power uses this encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactlin import Matrix, Subspace
from .fields import Field


def index_encode(idx: Sequence[int], q: int) -> int:
    k = 0
    for e in idx:
        if not 1 <= e <= q:
            raise ValueError(f"index entry {e} outside 1..{q}")
        k = k * q + (e - 1)
    return k


def index_decode(k: int, n: int, q: int) -> tuple[int, ...]:
    if not 0 <= k < q ** n:
        raise ValueError(f"offset {k} outside [0, {q}^{n})")
    out = [0] * n
    for s in range(n - 1, -1, -1):
        k, r = divmod(k, q)
        out[s] = r + 1
    return tuple(out)


def digits(k: int, n: int, q: int) -> tuple[int, ...]:
    """Zero-based slot values of offset ``k`` (no range checks)."""
    out = [0] * n
    for s in range(n - 1, -1, -1):
        k, out[s] = divmod(k, q)
    return tuple(out)


def log_q(dim: int, q: int) -> int:
    n, d = 0, 1
    while d < dim:
        d *= q
        n += 1
    if d != dim:
        raise ValueError(f"{dim} is not a power of {q}")
    return n


@dataclass(frozen=True, eq=False)
class TensorVector:
    """Element of ``E^{⊗n}`` in the basis ``x^{λ1} ⊗ ... ⊗ x^{λn}``."""

    q: int
    degree: int
    field: Field
    coords: dict  # encoded offset -> nonzero scalar

    @classmethod
    def from_indices(cls, q: int, degree: int, field: Field, entries) -> "TensorVector":
        """Build from ``{(λ1, ..., λn): value}`` with one-based entries."""
        coords = {}
        for idx, x in dict(entries).items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} has length {len(idx)}, expected {degree}")
            y = field.coerce(x)
            if y:
                coords[index_encode(idx, q)] = y
        return cls(q, degree, field, coords)

    @classmethod
    def basis(cls, q: int, idx: Sequence[int], field: Field) -> "TensorVector":
        return cls(q, len(idx), field, {index_encode(idx, q): field.one})

    def items(self):
        """``(one-based multi-index, value)`` pairs in encoded order."""
        for k in sorted(self.coords):
            yield index_decode(k, self.degree, self.q), self.coords[k]

    def __getitem__(self, idx):
        return self.coords.get(index_encode(idx, self.q), self.field.zero)

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (self.q, self.degree, self.field, self.coords) == (
            other.q, other.degree, other.field, other.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def tensor(self, other: "TensorVector") -> "TensorVector":
        if other.q != self.q or other.field != self.field:
            raise ValueError("tensor factors over different spaces")
        return TensorVector(self.q, self.degree + other.degree, self.field,
                            tensor_coords(self.coords, other.coords, self.q ** other.degree,
                                          self.field))

    def __matmul__(self, other):
        return self.tensor(other)


def tensor_coords(u: dict, v: dict, dim_v: int, field: Field) -> dict:
    p = field.modulus
    out = {}
    for a, x in u.items():
        base = a * dim_v
        for b, y in v.items():
            z = x * y
            if p:
                z %= p
            if z:
                out[base + b] = z
    return out


def embed(S: Subspace, i: int, j: int, q: int) -> Subspace:
    """``E^{⊗i} ⊗ S ⊗ E^{⊗j}``.

    The RREF of the result is written down directly: rows ``u_a ⊗ s ⊗ u_b``
    never meet each other's pivot columns.
    """
    k_dim = S.ambient_dim
    right = q ** j
    left = q ** i
    block = k_dim * right
    basis = []
    pivots = []
    for a in range(left):
        off_a = a * block
        for c, s in zip(S.pivots, S.basis):
            shifted = [(off_a + col * right, x) for col, x in s.items()]
            for b in range(right):
                basis.append({col + b: x for col, x in shifted})
                pivots.append(off_a + c * right + b)
    return Subspace(left * block, S.field, tuple(basis), tuple(pivots))


def kron(A: Matrix, B: Matrix) -> Matrix:
    f = A.field
    p = f.modulus
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            r = {}
            for ja, x in ra.items():
                base = ja * B.ncols
                for jb, y in rb.items():
                    z = x * y
                    if p:
                        z %= p
                    if z:
                        r[base + jb] = z
            rows.append(r)
    return Matrix(A.nrows * B.nrows, A.ncols * B.ncols, f, rows, trusted=True)


def operator_power(L: Matrix, n: int) -> Matrix:
    """Kronecker power ``L^{⊗n}`` acting slot-wise in the encoded basis."""
    if L.nrows != L.ncols:
        raise ValueError("operator_power needs a square matrix")
    out = Matrix.identity(1, L.field)
    for _ in range(n):
        out = kron(out, L)
    return out


def apply_slotwise(L: Matrix, coords: dict, n: int) -> dict:
    """``L^{⊗n}`` applied to a sparse vector without forming the big matrix."""
    q = L.nrows
    f = L.field
    p = f.modulus
    cols = L.transpose().rows  # cols[μ] = {λ: L[λ][μ]}
    v = coords
    for s in range(n):
        stride = q ** (n - 1 - s)
        out: dict = {}
        for k, x in v.items():
            mu = (k // stride) % q
            base = k - mu * stride
            for lam, y in cols[mu].items():
                key = base + lam * stride
                out[key] = out.get(key, 0) + x * y
        v = {k: (x % p if p else x) for k, x in out.items()}
        v = {k: x for k, x in v.items() if x}
    return v


def contract_slot(W: TensorVector, p: int, X) -> TensorVector:
    """Contract slot ``p`` of ``W`` (zero-based) against the vector ``X``."""
    n = W.degree
    if not 0 <= p < n:
        raise ValueError(f"slot {p} outside 0..{n - 1}")
    q = W.q
    f = W.field
    X = _as_vector(X, q, f)
    stride = q ** (n - 1 - p)
    out: dict = {}
    for k, w in W.coords.items():
        hi, rest = divmod(k, stride * q)
        lam, lo = divmod(rest, stride)
        x = X.get(lam)
        if x is None:
            continue
        key = hi * stride + lo
        out[key] = out.get(key, 0) + x * w
    out = {k: f.norm(v) for k, v in out.items()}
    return TensorVector(q, n - 1, f, {k: v for k, v in out.items() if v})


def contract_first(W: TensorVector, X) -> TensorVector:
    return contract_slot(W, 0, X)


def _as_vector(X, q: int, f: Field) -> dict:
    if isinstance(X, dict):
        items = X.items()
    else:
        X = list(X)
        if len(X) != q:
            raise ValueError(f"vector has length {len(X)}, expected {q}")
        items = enumerate(X)
    out = {}
    for i, x in items:
        y = f.coerce(x)
        if y:
            out[i] = y
    return out


def rotate(coords: dict, n: int, q: int, shift: int = 1) -> dict:
    """Cyclically move the last ``shift`` slots to the front."""
    shift %= n if n else 1
    if not shift:
        return dict(coords)
    tail = q ** shift
    head = q ** (n - shift)
    return {(k % tail) * head + k // tail: x for k, x in coords.items()}


def slot_matrix(coords: dict, n: int, q: int, p: int, field: Field) -> Matrix:
    """``q × q^{n-1}`` matrix whose row ``λ`` is the slot-``p`` contraction with ``e_λ``."""
    stride = q ** (n - 1 - p)
    rows = [{} for _ in range(q)]
    for k, w in coords.items():
        hi, rest = divmod(k, stride * q)
        lam, lo = divmod(rest, stride)
        rows[lam][hi * stride + lo] = w
    return Matrix(q, q ** (n - 1), field, rows, trusted=True)


def flattening(coords: dict, n: int, q: int, k: int, field: Field) -> Matrix:
    """``q^k × q^{n-k}`` matrix with the first ``k`` slots as the row index."""
    width = q ** (n - k)
    rows = [{} for _ in range(q ** k)]
    for key, w in coords.items():
        r, c = divmod(key, width)
        rows[r][c] = w
    return Matrix(q ** k, width, field, rows, trusted=True)


def first_slot_slices(vec: dict, n: int, q: int) -> dict[int, dict]:
    """Split ``v ∈ E^{⊗n}`` as ``sum_a e_a ⊗ v_a``; returns ``{a: v_a}``."""
    width = q ** (n - 1)
    out: dict[int, dict] = {}
    for k, x in vec.items():
        a, rest = divmod(k, width)
        out.setdefault(a, {})[rest] = x
    return out


def monomials(q: int, n: int) -> Iterable[tuple[int, ...]]:
    for k in range(q ** n):
        yield digits(k, n, q)
