"""Builtin forms: bilinear forms, (super) Yang-Mills and the 3-sphere form."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .exactlin import Matrix, inverse, is_invertible
from .fields import QI, Field, GaussianRational, parse_rational
from .forms import MultilinearForm


def bilinear_form(B: Matrix) -> MultilinearForm:
    """``W_{μν} = B[μ][ν]``."""
    if B.nrows != B.ncols:
        raise ValueError("bilinear form needs a square matrix")
    q = B.nrows
    coords = {mu * q + nu: x for mu, r in enumerate(B.rows) for nu, x in r.items()}
    return MultilinearForm(q, 2, B.field, coords)


def symplectic_matrix(field: Field) -> Matrix:
    return Matrix.from_dense([[0, 1], [-1, 0]], field)


def _check_metric(g: Matrix) -> Matrix:
    if g.nrows != g.ncols:
        raise ValueError("metric must be square")
    if g != g.transpose():
        raise ValueError("metric must be symmetric")
    if not is_invertible(g):
        raise ValueError("metric must be invertible")
    return inverse(g)


def _pairing_form(g: Matrix, signs: dict) -> MultilinearForm:
    """Sum of ``sign * g^{ab} g^{cd}`` over slot pairings of a 4-tensor.

    ``signs`` maps a pairing such as ``((0, 3), (1, 2))`` to its coefficient.
    """
    ginv = _check_metric(g)
    q = g.nrows
    f = g.field
    coords: dict = {}
    entries = [(a, b, x) for a, r in enumerate(ginv.rows) for b, x in r.items()]
    for ((s1, t1), (s2, t2)), sign in signs.items():
        for a, b, x in entries:
            for c, d, y in entries:
                idx = [0, 0, 0, 0]
                idx[s1], idx[t1], idx[s2], idx[t2] = a, b, c, d
                k = ((idx[0] * q + idx[1]) * q + idx[2]) * q + idx[3]
                coords[k] = coords.get(k, 0) + sign * x * y
    coords = {k: f.norm(v) for k, v in coords.items()}
    return MultilinearForm(q, 4, f, {k: v for k, v in coords.items() if v})


def yang_mills_form(g: Matrix) -> MultilinearForm:
    """4-linear form whose first-slot derivatives span ``g^{μν}[x_μ,[x_ν,x_λ]]``.

    Expanding the double commutator inside ``sum g^{λκ} e_κ ⊗ r_λ`` gives
    ``P_{(03)(12)} + P_{(01)(23)} - 2 P_{(02)(13)}`` where ``P`` pairs slots
    through ``g^{-1}``; it is invariant under cyclic slot rotation.
    """
    return _pairing_form(g, {((0, 3), (1, 2)): 1, ((0, 1), (2, 3)): 1, ((0, 2), (1, 3)): -2})


def super_yang_mills_form(g: Matrix) -> MultilinearForm:
    """Same construction with ``[x_μ, [x_ν, x_λ]_+]``; anti-invariant under rotation."""
    return _pairing_form(g, {((0, 3), (1, 2)): 1, ((0, 1), (2, 3)): -1})


@dataclass(frozen=True)
class RationalAnglePoint:
    """Exact point ``(cos φ, sin φ)`` on the unit circle."""

    c: object
    s: object

    def __post_init__(self):
        c, s = parse_rational(self.c), parse_rational(self.s)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)
        if c * c + s * s != 1:
            raise ValueError(f"({c}, {s}) is not on the unit circle")

    @classmethod
    def parse(cls, text: str) -> "RationalAnglePoint":
        """From ``"c/s"`` written as ``"4/5,3/5"`` or ``"4/5:3/5"``."""
        sep = "," if "," in text else ":"
        c, s = text.split(sep)
        return cls(c, s)

    @property
    def z(self) -> GaussianRational:
        return GaussianRational(self.c, self.s)


def _levi_civita(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def sphere_form(angles) -> MultilinearForm:
    """4-linear form on K^4 attached to the noncommutative 3-sphere.

    ``W = -sum ε_{αβγδ} cos(φ_α - φ_β + φ_γ - φ_δ) e_αβγδ
          + i sum sin(2(φ_μ - φ_ν)) e_μνμν``, with every trigonometric value
    read off products of the unit complex numbers ``z_k = c_k + i s_k``.
    """
    pts = [a if isinstance(a, RationalAnglePoint) else RationalAnglePoint.parse(a) for a in angles]
    if len(pts) != 4:
        raise ValueError("sphere_form needs four angle points")
    z = [p.z for p in pts]
    zbar = [w.conjugate() for w in z]
    coords: dict = {}

    def add(idx, val):
        k = ((idx[0] * 4 + idx[1]) * 4 + idx[2]) * 4 + idx[3]
        coords[k] = coords.get(k, 0) + val

    for perm in permutations(range(4)):
        a, b, c, d = perm
        cos = (z[a] * zbar[b] * z[c] * zbar[d]).re
        add(perm, GaussianRational(-_levi_civita(perm) * cos, 0))
    for mu in range(4):
        for nu in range(4):
            sin = (z[mu] * z[mu] * zbar[nu] * zbar[nu]).im
            if sin:
                add((mu, nu, mu, nu), GaussianRational(0, sin))
    return MultilinearForm(4, 4, QI, {k: v for k, v in coords.items() if v})


GENERIC_SPHERE_ANGLES = ("1,0", "4/5,3/5", "5/13,12/13", "8/17,15/17")
