"""Koszul N-complexes, the W-sequence and degreewise exactness checks.

A term of a complex of free left ``A``-modules is ``A ⊗ S`` with ``S`` a
subspace of some ``E^{⊗n}``.  At a fixed internal (total) degree ``t`` it
contributes ``A_{t-n} ⊗ S``, with basis ``(α, l)`` at index
``α * dim S + l``: ``α`` a standard monomial, ``l`` a row of ``S``'s RREF.
The differential moves the first tensor slot into the algebra factor:
``α ⊗ (v_0 ⊗ v') ↦ α v_0 ⊗ v'``.

Contracted complexes take the positions ``n = 0, 1, N, N+1, 2N, ...`` and use
``d`` and ``d^{N-1}`` alternately.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from .algebra import (
    Presentation, dual_slice, implied_global_dimension, position_degree,
    presentation_from_form,
)
from .exactlin import Matrix, Subspace, is_subspace, rank, screened_rank
from .forms import MultilinearForm, derived_subspace, is_preregular
from .tensor import first_slot_slices, log_q


class StructuralError(RuntimeError):
    """A differential does not map into the requested target."""


class PreconditionError(ValueError):
    pass


def koszul_space(P: Presentation, n: int) -> Subspace:
    """Tensor factor ``K_n = ∩_r E^{⊗n-N-r} ⊗ R ⊗ E^{⊗r}`` (full below ``N``)."""
    return dual_slice(P, n).space


@dataclass(frozen=True)
class WSequence:
    """Tensor factors ``W_0, ..., W_m`` of the W-sequence: full spaces below ``N``,
    derived subspaces ``W^{(m-n)}`` from ``N`` up to ``m``."""

    N: int
    m: int
    q: int
    spaces: tuple

    def space(self, n: int) -> Subspace:
        if n <= self.m:
            return self.spaces[n]
        return Subspace.zero(self.q ** n, self.spaces[0].field)

    @property
    def dims(self) -> list[int]:
        return [S.dim for S in self.spaces]


def build_w_sequence(W: MultilinearForm, N: int) -> WSequence:
    if W.m < N:
        raise ValueError(f"form arity m={W.m} is smaller than N={N}")
    spaces = []
    for n in range(W.m + 1):
        if n < N:
            spaces.append(Subspace.full(W.q ** n, W.field))
        else:
            spaces.append(derived_subspace(W, W.m - n))
    return WSequence(N, W.m, W.q, tuple(spaces))


# -- differentials ----------------------------------------------------------


def _coupling(source: Subspace, target: Subspace, q: int):
    """For each source row ``k_l``: ``{a: coordinates of k_{l,a} in target}``.

    Returns ``None`` when some slice ``k_{l,a}`` is not in ``target`` (the map
    may still land in ``A ⊗ target`` after reduction; callers fall back).
    """
    n = log_q(source.ambient_dim, q)
    out = []
    for k in source.basis:
        parts = {}
        for a, sl in first_slot_slices(k, n, q).items():
            if target.residual(sl):
                return None
            parts[a] = target.coordinates(sl)
        out.append(parts)
    return out


def _columns_to_matrix(cols: list[dict], nrows: int, field) -> Matrix:
    rows = [{} for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, x in col.items():
            rows[i][j] = x
    return Matrix(nrows, len(cols), field, rows, trusted=True)


def differential_matrix(P: Presentation, source: Subspace, target: Subspace,
                        internal_degree: int) -> Matrix:
    """Matrix of ``d: A_s ⊗ source → A_{s+1} ⊗ target`` with ``s = internal_degree - n``."""
    q = P.q
    f = P.field
    n = log_q(source.ambient_dim, q)
    if n < 1 or target.ambient_dim != q ** (n - 1):
        raise ValueError("target must live one tensor degree below the source")
    s = internal_degree - n
    tower = P.tower
    dim_t = target.dim
    if s < 0:
        dim_out = tower.dim(s + 1) * dim_t if s + 1 >= 0 else 0
        return Matrix(dim_out, 0, f)
    P.guard(internal_degree)
    dim_s = source.dim
    a_src = tower.dim(s)
    a_tgt = tower.dim(s + 1)
    cols: list[dict] = []
    coupling = _coupling(source, target, q)
    if coupling is not None:
        for alpha in range(a_src):
            mult = [tower.right_mul_std(alpha, a, s) for a in range(q)]
            for parts in coupling:
                col: dict = {}
                for a, coords in parts.items():
                    for beta, x in mult[a].items():
                        base = beta * dim_t
                        for j, c in coords.items():
                            col[base + j] = col.get(base + j, 0) + x * c
                col = {i: f.norm(v) for i, v in col.items()}
                cols.append({i: v for i, v in col.items() if v})
        return _columns_to_matrix(cols, a_tgt * dim_t, f)
    # general path: combine slices per output monomial, then test membership
    for alpha in range(a_src):
        mult = [tower.right_mul_std(alpha, a, s) for a in range(q)]
        for k in source.basis:
            slices = first_slot_slices(k, n, q)
            per_beta: dict[int, dict] = {}
            for a, sl in slices.items():
                for beta, x in mult[a].items():
                    acc = per_beta.setdefault(beta, {})
                    for c, y in sl.items():
                        acc[c] = acc.get(c, 0) + x * y
            col = {}
            for beta, vec in per_beta.items():
                vec = {c: f.norm(v) for c, v in vec.items()}
                vec = {c: v for c, v in vec.items() if v}
                if target.residual(vec):
                    raise StructuralError(
                        f"image of A_{s} ⊗ source leaves A_{s + 1} ⊗ target (degree {internal_degree})")
                for j, c in target.coordinates(vec).items():
                    col[beta * dim_t + j] = c
            cols.append(col)
    return _columns_to_matrix(cols, a_tgt * dim_t, f)


def dual_differential_matrix(P: Presentation, source: Subspace, target: Subspace,
                             degree: int) -> Matrix:
    """``Hom(target, A_j) → Hom(source, A_{j+1})``, ``ψ ↦ (k ↦ sum_a x_a ψ(k_a))``.

    This is ``Hom_A(d, A)`` for the differential ``A ⊗ source → A ⊗ target``;
    ``degree`` is the algebra degree ``j`` of the input.
    """
    q = P.q
    f = P.field
    tower = P.tower
    coupling = _coupling(source, target, q)
    if coupling is None:
        raise StructuralError("source is not contained in E ⊗ target")
    dim_s, dim_t = source.dim, target.dim
    if degree < 0:
        dim_out = tower.dim(degree + 1) * dim_s if degree + 1 >= 0 else 0
        return Matrix(dim_out, 0, f)
    a_src = tower.dim(degree)
    a_tgt = tower.dim(degree + 1)
    by_target: list[list] = [[] for _ in range(dim_t)]
    for l, parts in enumerate(coupling):
        for a, coords in parts.items():
            for i, c in coords.items():
                by_target[i].append((l, a, c))
    cols = []
    for beta in range(a_src):
        left = [None] * q
        for i in range(dim_t):
            col: dict = {}
            for l, a, c in by_target[i]:
                if left[a] is None:
                    left[a] = tower.left_mul(a, {beta: f.one}, degree)
                for gamma, x in left[a].items():
                    key = gamma * dim_s + l
                    col[key] = col.get(key, 0) + c * x
            col = {k: f.norm(v) for k, v in col.items()}
            cols.append({k: v for k, v in col.items() if v})
    return _columns_to_matrix(cols, a_tgt * dim_s, f)


# -- slices -----------------------------------------------------------------


SpaceFn = Callable[[int], Subspace]


@dataclass
class ComplexSlice:
    """One internal degree of a contracted complex.

    ``maps[h]`` links positions ``h`` and ``h - 1``: ``C_h → C_{h-1}`` for a
    chain slice, ``C^{h-1} → C^h`` for a cochain slice.  ``maps[0]`` is None.
    """

    internal_degree: int
    positions: list[int]
    dims: list[int]
    maps: list
    cochain: bool = False

    def euler_characteristic(self) -> int:
        return sum((-1) ** h * d for h, d in enumerate(self.dims))

    def transpose(self) -> "ComplexSlice":
        maps = [None] + [M.transpose() for M in self.maps[1:]]
        return ComplexSlice(self.internal_degree, self.positions, self.dims, maps,
                            not self.cochain)

    def is_complex(self) -> bool:
        for h in range(1, len(self.maps) - 1):
            A, B = self.maps[h], self.maps[h + 1]
            comp = B @ A if self.cochain else A @ B
            if not comp.is_zero():
                return False
        return True


def _positions(N: int, internal_degree: int | None, pattern, length: int | None) -> list[int]:
    if pattern is None:
        steps = []
        limit = length if length is not None else (internal_degree or 0) + 1
        for h in range(limit):
            steps.append(1 if h % 2 == 0 else N - 1)
        pattern = steps
    pos = [0]
    for jump in pattern:
        if jump not in (1, N - 1):
            raise ValueError(f"jump {jump} is neither 1 nor N-1")
        if length is not None and len(pos) > length:
            break
        nxt = pos[-1] + jump
        if internal_degree is not None and nxt > internal_degree:
            break
        pos.append(nxt)
    return pos


def _chain_step(P, spaces: SpaceFn, n_from: int, n_to: int, t: int) -> Matrix:
    M = None
    for n in range(n_from, n_to, -1):
        D = differential_matrix(P, spaces(n), spaces(n - 1), t)
        M = D if M is None else D @ M
    return M


def build_resolution_slice(P: Presentation, internal_degree: int, pattern=None,
                           spaces: SpaceFn | None = None, length: int | None = None) -> ComplexSlice:
    """Slice ``... → A_{t-n_1} ⊗ S_{n_1} → A_t ⊗ S_0`` of a contracted complex.

    ``pattern`` lists the jumps between consecutive positions (default
    ``1, N-1, 1, N-1, ...``); ``spaces`` gives the tensor factors (default the
    Koszul spaces); ``length`` truncates after that homological position.
    """
    if spaces is None:
        spaces = lambda n: koszul_space(P, n)  # noqa: E731
    t = internal_degree
    pos = _positions(P.N, t, pattern, length)
    tower = P.tower
    dims = [tower.dim(t - n) * spaces(n).dim for n in pos]
    maps: list = [None]
    for h in range(1, len(pos)):
        maps.append(_chain_step(P, spaces, pos[h], pos[h - 1], t))
    return ComplexSlice(t, pos, dims, maps)


def build_dual_slice(P: Presentation, degree: int, spaces: SpaceFn, top: int,
                     length: int) -> ComplexSlice:
    """Slice of ``Hom_A(resolution, A)`` with terms ``Hom(S_{n_h}, A_{degree + n_h - top})``.

    ``degree = 0`` carries the top class; Gorenstein resolutions are exact
    for every ``degree >= 1``.
    """
    pos = _positions(P.N, None, None, length)
    tower = P.tower

    def a_dim(j):
        return tower.dim(j) if j >= 0 else 0

    dims = [a_dim(degree + n - top) * spaces(n).dim for n in pos]
    maps: list = [None]
    for h in range(1, len(pos)):
        M = None
        for n in range(pos[h - 1] + 1, pos[h] + 1):
            # Hom(S_{n-1}, A_j) -> Hom(S_n, A_{j+1})
            D = dual_differential_matrix(P, spaces(n), spaces(n - 1), degree + n - 1 - top)
            M = D if M is None else D @ M
        maps.append(M)
    return ComplexSlice(degree, pos, dims, maps, cochain=True)


def slice_homology(sl: ComplexSlice, screen: bool = True) -> list[int]:
    """Homology dimension at every position (``dim - rank out - rank in``).

    Ranks are first taken modulo the screening prime.  Those are lower bounds,
    so a position whose screened ranks already add up to its dimension is
    exact; only the remaining positions are recomputed exactly.
    """
    maps = sl.maps
    H = len(sl.dims)
    fast: list = [0] * (H + 1)
    exact: list = [None] * (H + 1)
    for h in range(1, H):
        M = maps[h]
        if screen and M.field.characteristic == 0:
            fast[h] = screened_rank(M)
        else:
            fast[h] = None
    out = []
    for h in range(H):
        touching = [h] if h == H - 1 else [h, h + 1]
        touching = [k for k in touching if 1 <= k < H]
        if all(fast[k] is not None for k in touching):
            if sum(fast[k] for k in touching) == sl.dims[h]:
                out.append(0)
                continue
        for k in touching:
            if exact[k] is None:
                exact[k] = rank(maps[k])
        out.append(sl.dims[h] - sum(exact[k] for k in touching))
    return out


@dataclass
class HomologyReport:
    cutoff: int
    degrees: dict = dc_field(default_factory=dict)  # internal degree -> homology dims
    dims: dict = dc_field(default_factory=dict)  # internal degree -> term dims
    passed: bool = True
    notes: list[str] = dc_field(default_factory=list)

    def failing_degrees(self) -> list[int]:
        return [t for t, h in self.degrees.items() if any(h)]


def _run_slices(build, degrees, expected=None) -> HomologyReport:
    report = HomologyReport(cutoff=max(degrees) if degrees else 0)
    for t in degrees:
        sl = build(t)
        report.dims[t] = list(sl.dims)
        if not sl.is_complex():
            report.passed = False
            report.notes.append(f"degree {t}: consecutive maps do not compose to zero")
            report.degrees[t] = None
            continue
        h = slice_homology(sl)
        report.degrees[t] = h
        want = expected(t, len(h)) if expected else [0] * len(h)
        if h != want:
            report.passed = False
    return report


def exactness_check(P: Presentation, cutoff: int, length: int | None = None,
                    spaces: SpaceFn | None = None) -> HomologyReport:
    """Homology of the contracted complex in internal degrees ``1..cutoff``.

    With ``length`` the complex is cut after that homological position and a
    nonzero Koszul space just beyond it is reported as non-termination.
    """
    own_spaces = spaces is None
    if own_spaces:
        spaces = lambda n: koszul_space(P, n)  # noqa: E731
    report = _run_slices(
        lambda t: build_resolution_slice(P, t, spaces=spaces, length=length),
        list(range(1, cutoff + 1)))
    report.cutoff = cutoff
    if length is not None:
        beyond = position_degree(length + 1, P.N)
        if beyond <= cutoff and spaces(beyond).dim:
            report.passed = False
            report.notes.append(
                f"resolution does not terminate at position {length}: "
                f"tensor space in degree {beyond} has dimension {spaces(beyond).dim}")
    return report


def dN_zero_check(P: Presentation, cutoff: int) -> bool:
    """Every window of ``N`` consecutive differentials on ``K(A)`` vanishes up to ``cutoff``."""
    N = P.N
    for t in range(cutoff + 1):
        for n in range(N, t + 1):
            M = _chain_step(P, lambda k: koszul_space(P, k), n, n - N, t)
            if not M.is_zero():
                return False
    return True


# -- W-sequence and Gorenstein certification --------------------------------


@dataclass
class SubcomplexReport:
    passed: bool
    contained: dict  # n -> W_n ⊆ K_n
    equal: dict  # n -> W_n == K_n
    notes: list[str] = dc_field(default_factory=list)

    def __bool__(self):
        return self.passed


def w_subcomplex_check(W: MultilinearForm, N: int, cutoff: int) -> SubcomplexReport:
    """``W_n ⊆ K_n(A)`` for ``N <= n <= m`` and ``d`` restricts to the W-sequence."""
    if not is_preregular(W).preregular:
        raise PreconditionError("w_subcomplex_check needs a preregular form")
    P = presentation_from_form(W, N)
    seq = build_w_sequence(W, N)
    contained, equal = {}, {}
    notes = []
    for n in range(N, W.m + 1):
        K = koszul_space(P, n)
        contained[n] = is_subspace(seq.space(n), K)
        equal[n] = contained[n] and seq.space(n).dim == K.dim
    passed = all(contained.values())
    for n in range(1, W.m + 1):
        for t in range(n, cutoff + 1):
            try:
                differential_matrix(P, seq.space(n), seq.space(n - 1), t)
            except StructuralError as exc:
                passed = False
                notes.append(f"n={n}, degree {t}: {exc}")
                break
    return SubcomplexReport(passed, contained, equal, notes)


@dataclass
class GorensteinReport:
    certified_to: int
    global_dimension: int | None
    top_dims: dict
    resolution: HomologyReport | None = None
    dualized: HomologyReport | None = None
    plain_transpose: HomologyReport | None = None
    preregular: bool = False
    passed: bool = False
    reasons: list[str] = dc_field(default_factory=list)

    @property
    def summary(self) -> str:
        if self.passed:
            return f"certified to degree {self.certified_to}"
        return "not certified: " + "; ".join(self.reasons)


def gorenstein_check(P: Presentation, W: MultilinearForm, cutoff: int) -> GorensteinReport:
    """Finite evidence that the W-sequence is a Gorenstein resolution.

    (a) the contracted W-sequence is exact in internal degrees ``1..cutoff``;
    (b) its dual ``Hom_A(-, A)`` is exact in degrees ``1..cutoff`` (the top
    class in degree 0 is the trivial module); (c) ``dim W^{(0)} = 1`` and
    ``dim W^{(1)} = q``, matched by the Koszul-dual slices.  The plain matrix
    transpose of every slice is reported as well.
    """
    q, N, m = P.q, P.N, W.m
    reasons = []
    if W.q != q or W.field != P.field:
        raise ValueError("form and presentation disagree on q or field")
    D = implied_global_dimension(N, m)
    if D is None:
        reasons.append(f"no global dimension fits N={N}, m={m}")
        length = None
        pos = [0]
        while position_degree(len(pos), N) <= m:
            pos.append(position_degree(len(pos), N))
        length = len(pos) - 1
    else:
        length = D
    seq = build_w_sequence(W, N)
    top = {
        "derived_0": derived_subspace(W, 0).dim,
        "derived_1": derived_subspace(W, 1).dim,
        "dual_m": dual_slice(P, m).dim,
        "dual_m_minus_1": dual_slice(P, m - 1).dim,
    }
    report = GorensteinReport(certified_to=cutoff, global_dimension=D, top_dims=top)
    if top["dual_m"] != 1:
        reasons.append(f"top dual slice has dimension {top['dual_m']}, not 1")
    if P.R != seq.space(N):
        reasons.append("presentation relations differ from the form's derived relations")
    rep = is_preregular(W)
    report.preregular = rep.preregular
    if not rep.preregular:
        reasons.append("form is not preregular")
    if not (top["derived_0"] == 1 and top["derived_1"] == q
            and top["dual_m"] == 1 and top["dual_m_minus_1"] == q):
        reasons.append(f"dimension pattern (c) fails: {top}")

    spaces = seq.space
    res = exactness_check(P, cutoff, length=length, spaces=spaces)
    report.resolution = res
    if not res.passed:
        reasons.append(f"(a) W-resolution not exact in degrees {res.failing_degrees()}")

    plain = _run_slices(
        lambda t: build_resolution_slice(P, t, spaces=spaces, length=length).transpose(),
        list(range(1, cutoff + 1)))
    report.plain_transpose = plain

    def expected_dual(u, n_pos):
        want = [0] * n_pos
        if u == 0:
            want[-1] = 1
        return want

    dual = _run_slices(lambda u: build_dual_slice(P, u, spaces, m, length),
                       list(range(0, cutoff + 1)), expected_dual)
    dual.cutoff = cutoff
    report.dualized = dual
    if not dual.passed:
        bad = [u for u, h in dual.degrees.items() if h is None or h != expected_dual(u, len(h))]
        reasons.append(f"(b) dualized complex not exact in degrees {bad}")
    report.reasons = reasons
    report.passed = not reasons
    return report
