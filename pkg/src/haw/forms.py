"""Multilinear forms on K^q and their regularity conditions.

A form ``W`` of arity ``m`` is stored as its flattened coordinate vector in
``(K^q)^{⊗m}``: ``coords[offset] = W(e_{λ1}, ..., e_{λm})`` with the
big-endian offset of ``(λ1, ..., λm)``.  Matrices act on column vectors, so
``Q e_λ = sum_μ Q[μ][λ] e_μ``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactlin import (
    Matrix, Subspace, inverse, is_invertible, nullspace, rank, solve,
)
from .fields import Field
from .tensor import (
    TensorVector, apply_slotwise, flattening, index_decode, index_encode,
    operator_power, rotate, slot_matrix,
)


class DomainError(ValueError):
    """Operation undefined for the given arity or parameters."""


class MultilinearForm:
    __slots__ = ("q", "m", "field", "coords")

    def __init__(self, q: int, m: int, field: Field, coords: dict, *, trusted=False):
        if q < 1:
            raise ValueError("q must be at least 1")
        if m < 2:
            raise ValueError("forms need arity m >= 2")
        if not trusted:
            size = q ** m
            clean = {}
            for k, x in coords.items():
                if not 0 <= k < size:
                    raise ValueError(f"offset {k} outside [0, {size})")
                y = field.coerce(x)
                if y:
                    clean[k] = y
            coords = clean
        if not coords:
            raise ValueError("the zero form does not present an algebra")
        self.q = q
        self.m = m
        self.field = field
        self.coords = coords

    @classmethod
    def from_components(cls, q: int, m: int, field: Field, components) -> "MultilinearForm":
        """Build from ``{(λ1, ..., λm): value}`` with one-based indices."""
        coords = {}
        for idx, x in dict(components).items():
            if len(idx) != m:
                raise ValueError(f"index {idx} has length {len(idx)}, expected {m}")
            coords[index_encode(idx, q)] = x
        return cls(q, m, field, coords)

    def component(self, *idx):
        if len(idx) == 1 and isinstance(idx[0], (tuple, list)):
            idx = tuple(idx[0])
        return self.coords.get(index_encode(idx, self.q), self.field.zero)

    def components(self):
        for k in sorted(self.coords):
            yield index_decode(k, self.m, self.q), self.coords[k]

    def as_tensor(self) -> TensorVector:
        return TensorVector(self.q, self.m, self.field, dict(self.coords))

    def __eq__(self, other):
        if not isinstance(other, MultilinearForm):
            return NotImplemented
        return (self.q, self.m, self.field, self.coords) == (
            other.q, other.m, other.field, other.coords)

    def __repr__(self):
        return f"MultilinearForm(q={self.q}, m={self.m}, field={self.field}, nnz={len(self.coords)})"

    def change_field(self, target: Field) -> "MultilinearForm":
        return MultilinearForm(self.q, self.m, target, dict(self.coords))

    def scaled(self, c) -> "MultilinearForm":
        f = self.field
        c = f.coerce(c)
        return MultilinearForm(self.q, self.m, f, {k: f.norm(c * x) for k, x in self.coords.items()})

    def span(self) -> Subspace:
        return Subspace.span([self.coords], self.q ** self.m, self.field)


@dataclass
class RegularityReport:
    slot_nondegenerate: list[bool]
    q_matrix: Matrix | None = None
    q_unique: bool = False
    q_invertible: bool = False
    preregular: bool = False
    twist_identity: bool | None = None
    three_regular: bool | None = None
    pair_nullspace_dim: int | None = None
    notes: list[str] = dc_field(default_factory=list)


def slot_nondegenerate(W: MultilinearForm, p: int) -> bool:
    if not 0 <= p < W.m:
        raise ValueError(f"slot {p} outside 0..{W.m - 1}")
    M = slot_matrix(W.coords, W.m, W.q, p, W.field)
    return rank(M) == W.q


def _cyclic_system(W: MultilinearForm) -> Matrix:
    # unknown Q[μ][λ] sits at column μ*q + λ; equation for (λ0..λn) at its offset:
    #   sum_μ Q[μ][λn] W[μ, λ0..λ_{n-1}] = W[λ0..λn]
    q, m = W.q, W.m
    head = q ** (m - 1)
    rows = [{} for _ in range(q ** m)]
    for k, w in W.coords.items():
        mu, prefix = divmod(k, head)
        for lam in range(q):
            rows[prefix * q + lam][mu * q + lam] = w
    return Matrix(q ** m, q * q, W.field, rows, trusted=True)


def solve_cyclic_Q(W: MultilinearForm) -> tuple[Matrix, bool] | None:
    """Solve ``W(X_0, ..., X_n) = W(Q X_n, X_0, ..., X_{n-1})`` for ``Q``.

    Returns one solution and whether it is the only one, or ``None`` if the
    linear system is inconsistent.  Invertibility is left to the caller.
    """
    A = _cyclic_system(W)
    x, kernel = solve(A, dict(W.coords))
    if x is None:
        return None
    q = W.q
    rows = [{} for _ in range(q)]
    for u, val in x.items():
        mu, lam = divmod(u, q)
        rows[mu][lam] = val
    return Matrix(q, q, W.field, rows, trusted=True), kernel.dim == 0


def pullback(W: MultilinearForm, L: Matrix) -> dict:
    """Coordinates of ``W ∘ L^{⊗m}``, i.e. ``(X_i) ↦ W(L X_1, ..., L X_m)``."""
    return apply_slotwise(L.transpose(), W.coords, W.m)


def twist_identity(W: MultilinearForm, Q: Matrix) -> bool:
    """``W ∘ Q^{⊗m} = W``."""
    return pullback(W, Q) == W.coords


def cyclic_identity(W: MultilinearForm, Q: Matrix) -> bool:
    """Check the cyclic twist condition directly on every basis tuple."""
    # move W's first slot to the end, then feed Q into it
    shifted = rotate(W.coords, W.m, W.q, shift=-1)
    lhs = apply_slotwise_last(Q, shifted, W.m, W.q)
    return lhs == W.coords


def apply_slotwise_last(Q: Matrix, coords: dict, m: int, q: int) -> dict:
    """Precompose the last slot with ``Q``: ``(X) ↦ F(X_0, ..., Q X_n)``."""
    f = Q.field
    out: dict = {}
    for k, w in coords.items():
        prefix, mu = divmod(k, q)
        for lam, y in Q.rows[mu].items():
            key = prefix * q + lam
            out[key] = out.get(key, 0) + w * y
    out = {k: f.norm(v) for k, v in out.items()}
    return {k: v for k, v in out.items() if v}


def is_preregular(W: MultilinearForm) -> RegularityReport:
    slots = [slot_nondegenerate(W, p) for p in range(W.m)]
    report = RegularityReport(slot_nondegenerate=slots)
    sol = solve_cyclic_Q(W)
    if sol is None:
        report.notes.append("no Q satisfies the cyclic twist condition")
    else:
        Q, unique = sol
        report.q_matrix = Q
        report.q_unique = unique
        report.q_invertible = is_invertible(Q)
        if not unique:
            report.notes.append("twist Q is not unique")
        if not report.q_invertible:
            report.notes.append("twist Q is singular")
    if not slots[0]:
        report.notes.append("slot 0 is degenerate")
    report.preregular = bool(slots[0] and report.q_matrix is not None
                             and report.q_invertible and report.q_unique)
    if report.preregular:
        report.twist_identity = twist_identity(W, report.q_matrix)
        if not all(slots):
            # cannot happen for a preregular form; surfaced rather than hidden
            report.notes.append("preregular form with a degenerate slot")
    return report


def pair_system(W: MultilinearForm) -> Matrix:
    """Linear system in ``(L0, L1)`` for ``W(L0 X0, X1, ...) = W(X0, L1 X1, ...)``."""
    q, m = W.q, W.m
    qq = q * q
    head = q ** (m - 1)
    tail = q ** (m - 2)
    rows = [{} for _ in range(q ** m)]
    for k, w in W.coords.items():
        mu, rest = divmod(k, head)
        # W(L0 X0, ...): coefficient of L0[μ][λ0] in equation (λ0, rest)
        for lam in range(q):
            r = rows[lam * head + rest]
            col = mu * q + lam
            r[col] = W.field.norm(r.get(col, 0) + w)
        lam0, rest2 = divmod(k, head)
        mu1, rest2 = divmod(rest2, tail)
        # -W(X0, L1 X1, ...): coefficient of L1[μ1][λ1] in equation (λ0, λ1, rest2)
        for lam1 in range(q):
            r = rows[lam0 * head + lam1 * tail + rest2]
            col = qq + mu1 * q + lam1
            r[col] = W.field.norm(r.get(col, 0) - w)
    rows = [{j: x for j, x in r.items() if x} for r in rows]
    return Matrix(q ** m, 2 * qq, W.field, rows, trusted=True)


def is_three_regular(W: MultilinearForm, N: int) -> RegularityReport:
    if N < 2 or W.m != N + 1:
        raise DomainError(f"3-regularity is defined for (N+1)-linear forms; got m={W.m}, N={N}")
    report = is_preregular(W)
    K = nullspace(pair_system(W))
    report.pair_nullspace_dim = K.dim
    q = W.q
    one = W.field.one
    ident_pair = {}
    for i in range(q):
        ident_pair[i * q + i] = one
        ident_pair[q * q + i * q + i] = one
    if K.residual(ident_pair):
        report.notes.append("(1, 1) missing from the pair nullspace")
    report.three_regular = report.preregular and K.dim == 1
    return report


def gl_act(W: MultilinearForm, L: Matrix) -> MultilinearForm:
    """``W^L(X_0, ..., X_n) = W(L^{-1} X_0, ..., L^{-1} X_n)``."""
    if L.shape != (W.q, W.q):
        raise ValueError(f"L must be {W.q}x{W.q}")
    try:
        Linv = inverse(L)
    except ZeroDivisionError as exc:
        raise ValueError("gl_act needs an invertible matrix") from exc
    P = operator_power(Linv.transpose(), W.m)
    return MultilinearForm(W.q, W.m, W.field, P.apply(W.coords), trusted=True)


def derived_subspace(W: MultilinearForm, n: int) -> Subspace:
    """``W^{(n)}``: span of the tensors obtained by freezing the first ``n`` slots."""
    if not 0 <= n <= W.m:
        raise ValueError(f"n must lie in 0..{W.m}")
    F = flattening(W.coords, W.m, W.q, n, W.field)
    return Subspace.span(F.rows, W.q ** (W.m - n), W.field)
