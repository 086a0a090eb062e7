"""Homogeneous algebras ``A(E, R)``, their graded pieces and Koszul-dual slices.

Graded pieces are computed degree by degree.  With ``I_n`` the span of all
placements ``E^{⊗i} ⊗ R ⊗ E^{⊗j}`` in degree ``n``::

    I_{n+1} = E ⊗ I_n + R ⊗ E^{⊗(n+1-N)}

and ``R ⊗ I_k`` already lies in ``E ⊗ I_n``, so ``A_{n+1}`` is the quotient of
``E ⊗ A_n`` by the images of ``R ⊗ σ`` for standard monomials ``σ`` of
``A_{n+1-N}``.  Only that small quotient is ever row-reduced.  The direct
placement sum is kept as :func:`relation_ideal_slice` for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exactlin import (
    Echelon, Matrix, Subspace, annihilator, intersect, inverse, is_subspace,
    subspace_sum,
)
from .forms import MultilinearForm, derived_subspace, is_preregular
from .tensor import TensorVector, apply_slotwise, digits, embed

DEFAULT_CEILING = 2 ** 20


class ResourceError(RuntimeError):
    """A computation would exceed the configured size ceiling."""


@dataclass(frozen=True, eq=False)
class Presentation:
    """``A(E, R)`` with ``E = K^q`` and relations ``R ⊆ E^{⊗N}``."""

    q: int
    N: int
    R: Subspace
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.R.ambient_dim != self.q ** self.N:
            raise ValueError(f"relations must live in a space of dimension {self.q}^{self.N}")

    @property
    def field(self):
        return self.R.field

    @cached_property
    def tower(self) -> "QuotientTower":
        return QuotientTower(self)

    @cached_property
    def _dual(self) -> dict:
        return {}

    def guard(self, n: int) -> None:
        if self.q ** n > self.ceiling:
            raise ResourceError(f"q^n = {self.q}^{n} exceeds the ceiling {self.ceiling}")


def presentation_from_form(W: MultilinearForm, N: int, ceiling: int = DEFAULT_CEILING) -> Presentation:
    """``A(W, N)``: relations ``W^{(m-N)}``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if W.m < N:
        raise ValueError(f"form arity m={W.m} is smaller than N={N}")
    return Presentation(W.q, N, derived_subspace(W, W.m - N), ceiling)


def free_presentation(q: int, N: int, field, ceiling: int = DEFAULT_CEILING) -> Presentation:
    return Presentation(q, N, Subspace.zero(q ** N, field), ceiling)


class QuotientTower:
    """Standard-monomial bases of ``A_0, A_1, ...`` and left multiplication.

    ``std[s]`` lists zero-based words; each word of degree ``s >= 1`` is
    ``(a,) + σ`` with ``σ`` in ``std[s-1]``.  ``rel[s]`` is the reduced echelon
    form, in the coordinates ``a * dim A_{s-1} + index(σ)`` of ``E ⊗ A_{s-1}``,
    of the relations that cut ``A_s`` out of ``E ⊗ A_{s-1}``.
    """

    def __init__(self, P: Presentation):
        self.P = P
        self.q = P.q
        self.N = P.N
        self.field = P.field
        self.std: list[list[tuple]] = [[()]]
        self.index: list[dict] = [{(): 0}]
        self.rel: list[Echelon | None] = [None]
        self.column_to_std: list[dict | None] = [None]
        self._right: dict = {}

    def dim(self, s: int) -> int:
        self.ensure(s)
        return len(self.std[s])

    def ensure(self, s: int) -> None:
        while len(self.std) <= s:
            self._extend()

    def _extend(self) -> None:
        s = len(self.std)  # degree being built
        q, N = self.q, self.N
        prev = self.std[s - 1]
        d = len(prev)
        ech = Echelon(q * d, self.field)
        if s == N:
            ech.extend(self.P.R.basis)
        elif s > N:
            k = s - N
            for sigma in range(len(self.std[k])):
                cache: dict = {}
                for r in self.P.R.basis:
                    vec: dict = {}
                    for w, x in r.items():
                        word = digits(w, N, q)
                        tail = self._left_word(word[1:], k, sigma, cache)
                        base = word[0] * d
                        for i, y in tail.items():
                            vec[base + i] = vec.get(base + i, 0) + x * y
                    norm = self.field.norm
                    vec = {j: norm(v) for j, v in vec.items()}
                    ech.add({j: v for j, v in vec.items() if v})
        free = [c for c in range(q * d) if c not in ech.rows]
        words = [(c // d,) + prev[c % d] for c in free]
        self.std.append(words)
        self.index.append({w: i for i, w in enumerate(words)})
        self.rel.append(ech)
        self.column_to_std.append({c: i for i, c in enumerate(free)})

    def _left_word(self, word: tuple, k: int, sigma: int, cache: dict) -> dict:
        """``NF(word ⊗ σ)`` for a standard monomial ``σ`` of degree ``k``."""
        if not word:
            return {sigma: self.field.one}
        hit = cache.get(word)
        if hit is not None:
            return hit
        inner = self._left_word(word[1:], k, sigma, cache)
        out = self.left_mul(word[0], inner, k + len(word) - 1)
        cache[word] = out
        return out

    def left_mul(self, a: int, vec: dict, s: int) -> dict:
        """``x_a · v`` for ``v ∈ A_s`` given in standard coordinates."""
        self.ensure(s + 1)
        d = len(self.std[s])
        shifted = {a * d + i: x for i, x in vec.items()}
        ech = self.rel[s + 1]
        res = ech.reduce(shifted) if ech is not None else shifted
        to_std = self.column_to_std[s + 1]
        if to_std is None:
            return res
        return {to_std[c]: x for c, x in res.items()}

    def right_mul_std(self, alpha: int, a: int, s: int) -> dict:
        """``α · x_a`` for the standard monomial ``std[s][alpha]``."""
        key = (s, alpha, a)
        hit = self._right.get(key)
        if hit is not None:
            return hit
        if s == 0:
            self.ensure(1)
            out = {self.index[1][(a,)]: self.field.one}
        else:
            word = self.std[s][alpha]
            inner = self.right_mul_std(self.index[s - 1][word[1:]], a, s - 1)
            out = self.left_mul(word[0], inner, s)
        self._right[key] = out
        return out

    def right_mul(self, vec: dict, a: int, s: int) -> dict:
        f = self.field
        out: dict = {}
        for alpha, x in vec.items():
            for b, y in self.right_mul_std(alpha, a, s).items():
                out[b] = out.get(b, 0) + x * y
        out = {b: f.norm(v) for b, v in out.items()}
        return {b: v for b, v in out.items() if v}

    def normal_form(self, vec: dict, s: int) -> dict:
        """Class in ``A_s`` of ``vec ∈ E^{⊗s}`` (encoded coordinates)."""
        f = self.field
        out: dict = {}
        memo: dict = {}
        for k, x in vec.items():
            for b, y in self._monomial_nf(digits(k, s, self.q), memo).items():
                out[b] = out.get(b, 0) + x * y
        out = {b: f.norm(v) for b, v in out.items()}
        return {b: v for b, v in out.items() if v}

    def _monomial_nf(self, word: tuple, memo: dict) -> dict:
        if not word:
            return {0: self.field.one}
        hit = memo.get(word)
        if hit is None:
            hit = self.left_mul(word[0], self._monomial_nf(word[1:], memo), len(word) - 1)
            memo[word] = hit
        return hit

    def lift(self, vec: dict, s: int) -> dict:
        """Representative in ``E^{⊗s}`` spanned by standard monomials."""
        q = self.q
        words = self.std[s]
        out = {}
        for i, x in vec.items():
            k = 0
            for e in words[i]:
                k = k * q + e
            out[k] = x
        return out


# -- graded pieces ----------------------------------------------------------


def relation_ideal_slice(P: Presentation, n: int) -> Subspace:
    """``sum_{i+N+j=n} E^{⊗i} ⊗ R ⊗ E^{⊗j}`` computed directly."""
    P.guard(n)
    q = P.q
    S = Subspace.zero(q ** n, P.field)
    for i in range(n - P.N + 1):
        S = subspace_sum(S, embed(P.R, i, n - P.N - i, q))
    return S


def graded_dim(P: Presentation, n: int, method: str = "tower") -> int:
    """``dim A_n = q^n - dim(sum of relation placements)``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    P.guard(n)
    if n < P.N:
        return P.q ** n
    if method == "placements":
        return P.q ** n - relation_ideal_slice(P, n).dim
    if method != "tower":
        raise ValueError(f"unknown method {method!r}")
    return P.tower.dim(n)


def graded_basis(P: Presentation, n: int) -> list[tuple[int, ...]]:
    """Monomials (one-based) whose classes form a basis of ``A_n``."""
    P.guard(n)
    P.tower.ensure(n)
    return [tuple(e + 1 for e in w) for w in P.tower.std[n]]


@dataclass(frozen=True)
class HilbertSeries:
    coefficients: tuple[int, ...]

    def __getitem__(self, n):
        return self.coefficients[n]

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def times(self, poly) -> list[int]:
        """Truncated product with a polynomial given by its coefficient list."""
        n = len(self.coefficients)
        out = [0] * n
        for i, a in enumerate(self.coefficients):
            for j, c in enumerate(poly):
                if i + j < n:
                    out[i + j] += a * c
        return out


def hilbert(P: Presentation, nmax: int, method: str = "tower") -> HilbertSeries:
    P.guard(nmax)
    return HilbertSeries(tuple(graded_dim(P, n, method) for n in range(nmax + 1)))


def denominator(q: int, N: int, kind: str) -> list[int]:
    """``1 - qt + t^2`` (``dim2``) or ``1 - qt + qt^N - t^{N+1}`` (``dim3``)."""
    if kind == "dim2":
        return [1, -q, 1]
    if kind == "dim3":
        c = [0] * (N + 2)
        c[0], c[1] = 1, -q
        c[N] += q
        c[N + 1] -= 1
        return c
    raise ValueError(f"unknown kind {kind!r}")


def series_from_denominator(den, nmax: int) -> HilbertSeries:
    """Power series ``1 / den(t)`` by the linear recurrence it defines."""
    if den[0] != 1:
        raise ValueError("denominator must have constant term 1")
    a = [1]
    for n in range(1, nmax + 1):
        a.append(-sum(den[k] * a[n - k] for k in range(1, min(n, len(den) - 1) + 1)))
    return HilbertSeries(tuple(a))


def series_expand(q: int, N: int, kind: str, nmax: int) -> HilbertSeries:
    return series_from_denominator(denominator(q, N, kind), nmax)


# -- Koszul dual ------------------------------------------------------------


@dataclass(frozen=True)
class DualSlice:
    n: int
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


def _dual_space(P: Presentation, n: int) -> Subspace:
    cache = P._dual
    hit = cache.get(n)
    if hit is not None:
        return hit
    P.guard(n)
    q, N = P.q, P.N
    if n < N:
        S = Subspace.full(q ** n, P.field)
    elif n == N:
        S = P.R
    else:
        prev = _dual_space(P, n - 1)
        # for n > N every placement has room on the left or on the right
        S = intersect(embed(prev, 1, 0, q), embed(prev, 0, 1, q))
    cache[n] = S
    return S


def dual_slice(P: Presentation, n: int, method: str = "recursive") -> DualSlice:
    """``A^{!*}_n = ∩_{i+N+j=n} E^{⊗i} ⊗ R ⊗ E^{⊗j}`` (full space below ``N``)."""
    if method == "recursive":
        return DualSlice(n, _dual_space(P, n))
    if method != "placements":
        raise ValueError(f"unknown method {method!r}")
    P.guard(n)
    q, N = P.q, P.N
    if n < N:
        return DualSlice(n, Subspace.full(q ** n, P.field))
    S = embed(P.R, 0, n - N, q)
    for i in range(1, n - N + 1):
        S = intersect(S, embed(P.R, i, n - N - i, q))
    return DualSlice(n, S)


def dual_dims(P: Presentation, nmax: int) -> list[int]:
    return [dual_slice(P, n).dim for n in range(nmax + 1)]


def quadratic_dual_relations_check(B: Matrix) -> bool:
    """``R^⊥`` equals the span of ``e_μ ⊗ e_ν - (1/q) B_{μν} B^{ρτ} e_τ ⊗ e_ρ``."""
    q = B.nrows
    f = B.field
    try:
        Binv = inverse(B)
    except ZeroDivisionError as exc:
        raise ValueError("quadratic_dual_relations_check needs an invertible B") from exc
    tensor = {mu * q + nu: x for mu, r in enumerate(B.rows) for nu, x in r.items()}
    r_perp = annihilator(Subspace.span([tensor], q * q, f))
    # sum_{ρτ} B^{ρτ} e_τ ⊗ e_ρ
    inv_tensor = {}
    for rho, r in enumerate(Binv.rows):
        for tau, x in r.items():
            inv_tensor[tau * q + rho] = x
    inv_q = f.inv(f.coerce(q))
    vecs = []
    for mu in range(q):
        for nu in range(q):
            b = B[mu, nu]
            v = {mu * q + nu: f.one}
            if b:
                c = f.norm(inv_q * b)
                for k, y in inv_tensor.items():
                    v[k] = f.norm(v.get(k, 0) - c * y)
            vecs.append({k: x for k, x in v.items() if x})
    return Subspace.span(vecs, q * q, f) == r_perp


def extract_top_form(P: Presentation, m: int) -> MultilinearForm | None:
    """Generator of ``A^{!*}_m`` when that slice is one-dimensional.

    The RREF gauge makes the first nonzero component (encoded order) equal 1.
    """
    if m < P.N:
        raise ValueError("m must be at least N")
    S = dual_slice(P, m).space
    if S.dim != 1:
        return None
    return MultilinearForm(P.q, m, P.field, dict(S.basis[0]), trusted=True)


def implied_global_dimension(N: int, m: int) -> int | None:
    """Global dimension forced on a Koszul-Gorenstein ``A(W, N)`` with ``W`` m-linear.

    ``N = 2``: ``D = m``.  ``N >= 3``: ``m = N p + 1`` and ``D = 2p + 1``.
    ``None`` flags an inconsistent pair.
    """
    if N < 2 or m < N:
        return None
    if N == 2:
        return m
    p, r = divmod(m - 1, N)
    if r or p < 1:
        return None
    return 2 * p + 1


def position_degree(h: int, N: int) -> int:
    """Tensor degree of homological position ``h`` in the contracted complex."""
    return N * (h // 2) + (h % 2)


# -- the linear form ω_W and the twist σ_W ----------------------------------


def omega_eval(W: MultilinearForm, u: TensorVector, v: TensorVector):
    """``W`` paired with ``u ⊗ v``; zero unless the degrees add up to ``m``."""
    f = W.field
    if u.degree + v.degree != W.m:
        return f.zero
    width = W.q ** v.degree
    s = 0
    for a, x in u.coords.items():
        base = a * width
        for b, y in v.coords.items():
            w = W.coords.get(base + b)
            if w is not None:
                s = s + w * x * y
    return f.norm(s) if s else f.zero


def sigma_apply(Q: Matrix, t: TensorVector) -> TensorVector:
    """``Q^{⊗n} t``: the degree-zero automorphism induced on tensors."""
    return TensorVector(t.q, t.degree, t.field, apply_slotwise(Q, t.coords, t.degree))


def sigma_preserves_dual_ideal(W: MultilinearForm, N: int) -> bool:
    """``Q_W^{⊗N}`` maps ``R^⊥`` into itself."""
    rep = is_preregular(W)
    if not rep.preregular:
        raise ValueError("sigma_preserves_dual_ideal needs a preregular form")
    R = derived_subspace(W, W.m - N)
    r_perp = annihilator(R)
    Q = rep.q_matrix
    images = [apply_slotwise(Q, rho, N) for rho in r_perp.basis]
    return is_subspace(Subspace.span(images, r_perp.ambient_dim, W.field), r_perp)


__all__ = [
    "DEFAULT_CEILING", "DualSlice", "HilbertSeries", "Presentation", "QuotientTower",
    "ResourceError", "denominator", "dual_dims", "dual_slice", "extract_top_form",
    "free_presentation", "graded_basis", "graded_dim", "hilbert", "implied_global_dimension",
    "omega_eval", "position_degree", "presentation_from_form",
    "quadratic_dual_relations_check", "relation_ideal_slice", "series_expand",
    "series_from_denominator", "sigma_apply", "sigma_preserves_dual_ideal",
]
