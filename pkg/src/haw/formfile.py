"""JSON file formats for forms, matrices and presentations.

Form file::

    {"field": "Q" | "Qi" | "Fp", "p": 101, "q": 2, "m": 2,
     "entries": [{"idx": [1, 2], "re": "1", "im": "0"}, ...]}

``p`` only for ``Fp``, ``im`` only for ``Qi``; omitted entries are zero.
A matrix file has ``field``/``p`` and ``rows``, a list of lists of scalars
(``"a/b"`` strings, or ``[re, im]`` pairs over ``Qi``).  A presentation file
has ``field``/``p``, ``q``, ``N`` and ``relations``, each a list of entries
in the form-file style; an empty list presents the free algebra.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import DEFAULT_CEILING, Presentation
from .exactlin import Matrix, Subspace
from .fields import Field, FieldMismatchError
from .forms import MultilinearForm
from .tensor import index_encode


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def _read(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be an object")
    return data


def field_from_json(data: dict) -> Field:
    kind = data.get("field", "Q")
    try:
        if kind == "Fp":
            return Field("Fp", int(data["p"]))
        if "p" in data and data["p"] is not None:
            raise InputError(f"'p' is only meaningful for field Fp, not {kind}")
        return Field(kind)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad field specification: {exc}") from exc


def _nat(data: dict, key: str) -> int:
    v = data.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise InputError(f"'{key}' must be a positive integer")
    return v


def _entries(entries, q: int, m: int, f: Field) -> dict:
    if not isinstance(entries, list):
        raise InputError("'entries' must be a list")
    coords: dict = {}
    for e in entries:
        if not isinstance(e, dict) or "idx" not in e:
            raise InputError(f"entry without idx: {e!r}")
        idx = e["idx"]
        if not isinstance(idx, list) or len(idx) != m:
            raise InputError(f"idx {idx!r} must be a list of length {m}")
        try:
            k = index_encode(idx, q)
        except (ValueError, TypeError) as exc:
            raise InputError(f"idx {idx!r}: {exc}") from exc
        if k in coords:
            raise InputError(f"duplicate idx {idx}")
        if "im" in e and f.kind != "Qi" and e["im"] not in (None, "0", 0):
            raise InputError(f"imaginary part given for field {f}")
        try:
            coords[k] = f.parse(e.get("re", "0"), e.get("im") if f.kind == "Qi" else None)
        except (ValueError, ZeroDivisionError, FieldMismatchError) as exc:
            raise InputError(f"idx {idx}: {exc}") from exc
    return coords


def form_from_json(data) -> MultilinearForm:
    data = _read(data)
    f = field_from_json(data)
    q, m = _nat(data, "q"), _nat(data, "m")
    coords = _entries(data.get("entries"), q, m, f)
    try:
        return MultilinearForm(q, m, f, coords)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


load_form = form_from_json


def form_to_json(W: MultilinearForm) -> dict:
    f = W.field
    out = {"field": f.kind, "q": W.q, "m": W.m}
    if f.kind == "Fp":
        out["p"] = f.p
    entries = []
    for idx, x in W.components():
        re, im = f.format(x)
        e = {"idx": [i for i in idx], "re": re}
        if im is not None:
            e["im"] = im
        entries.append(e)
    out["entries"] = entries
    return out


def dump_form(W: MultilinearForm, path) -> None:
    Path(path).write_text(json.dumps(form_to_json(W), indent=2, sort_keys=True) + "\n")


def _scalar(x, f: Field):
    if isinstance(x, list):
        if len(x) != 2:
            raise InputError(f"complex scalar must be [re, im], got {x!r}")
        return f.parse(str(x[0]), str(x[1]))
    return f.parse(str(x))


def matrix_from_json(data, field: Field | None = None) -> Matrix:
    data = _read(data)
    f = field if field is not None and "field" not in data else field_from_json(data)
    rows = data.get("rows")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("'rows' must be a nonempty list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("rows have different lengths")
    try:
        dense = [[_scalar(x, f) for x in r] for r in rows]
    except (ValueError, ZeroDivisionError, FieldMismatchError) as exc:
        raise InputError(str(exc)) from exc
    return Matrix.from_dense(dense, f)


load_matrix = matrix_from_json


def presentation_from_json(data, ceiling: int = DEFAULT_CEILING) -> Presentation:
    data = _read(data)
    f = field_from_json(data)
    q, N = _nat(data, "q"), _nat(data, "N")
    if N < 2:
        raise InputError("N must be at least 2")
    rels = data.get("relations", [])
    if not isinstance(rels, list):
        raise InputError("'relations' must be a list")
    vecs = [_entries(r, q, N, f) for r in rels]
    return Presentation(q, N, Subspace.span(vecs, q ** N, f), ceiling)


load_presentation = presentation_from_json
