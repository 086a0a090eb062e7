"""``haw`` command line: inspect, check, orbit, extract, hilbert.

Every command builds a JSON-serializable report (the source of truth) and
optionally renders it as markdown.  Exit codes: 0 pass, 1 a check failed,
2 input or resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import (
    DEFAULT_CEILING, Presentation, ResourceError, dual_dims, extract_top_form,
    dual_slice, hilbert, implied_global_dimension, presentation_from_form,
)
from .exactlin import Matrix, inverse, is_invertible
from .fields import FieldMismatchError, Field, prime_field, QI, Q
from .formfile import (
    InputError, form_from_json, form_to_json, matrix_from_json,
    presentation_from_json,
)
from .forms import MultilinearForm, gl_act, is_preregular, is_three_regular
from .koszul import (
    PreconditionError, StructuralError, dN_zero_check, exactness_check,
    gorenstein_check, w_subcomplex_check,
)
from .library import (
    GENERIC_SPHERE_ANGLES, bilinear_form, sphere_form, super_yang_mills_form,
    symplectic_matrix, yang_mills_form,
)

BUILTINS = ("symplectic2", "symmetric", "bilinear", "yang-mills", "super-yang-mills", "sphere")
DEFAULT_CUTOFF = {2: 10, 3: 7, 4: 6}

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def default_cutoff(q: int) -> int:
    return DEFAULT_CUTOFF.get(q, 5)


# -- input ------------------------------------------------------------------


def _field(args) -> Field | None:
    if args.field is None:
        if args.p is not None:
            raise InputError("--p needs --field Fp")
        return None
    if args.field == "Fp":
        if args.p is None:
            raise InputError("--field Fp needs --p")
        return prime_field(args.p)
    if args.p is not None:
        raise InputError("--p is only meaningful with --field Fp")
    return Field(args.field)


def builtin_form(name: str, q: int | None, angles, matrix_path, field: Field) -> tuple[MultilinearForm, int]:
    """Builtin form and its natural ``N``."""
    base = QI if name == "sphere" else Q
    if name == "symplectic2":
        return bilinear_form(symplectic_matrix(base)), 2
    if name == "symmetric":
        return bilinear_form(Matrix.identity(q or 2, base)), 2
    if name == "bilinear":
        if matrix_path is None:
            raise InputError("builtin bilinear needs --matrix")
        B = matrix_from_json(matrix_path, base)
        if B.nrows != B.ncols:
            raise InputError("bilinear matrix must be square")
        return bilinear_form(B), 2
    if name in ("yang-mills", "super-yang-mills"):
        g = Matrix.identity(q or 3, base)
        build = yang_mills_form if name == "yang-mills" else super_yang_mills_form
        return build(g), 3
    if name == "sphere":
        if q not in (None, 4):
            raise InputError("the sphere form lives on q = 4")
        return sphere_form(angles or GENERIC_SPHERE_ANGLES), 2
    raise InputError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def load_input_form(args) -> tuple[MultilinearForm, int, dict]:
    if (args.form is None) == (args.builtin is None):
        raise InputError("give exactly one of --form and --builtin")
    field = _field(args)
    if args.form is not None:
        W = form_from_json(args.form)
        natural_N = max(2, W.m - 1)
        source = {"form": str(args.form)}
    else:
        try:
            W, natural_N = builtin_form(args.builtin, args.q, args.angles, args.matrix, field)
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(str(exc)) from exc
        source = {"builtin": args.builtin}
        if args.q is not None:
            source["q"] = args.q
        if args.angles:
            source["angles"] = list(args.angles)
    if field is not None and field != W.field:
        try:
            W = W.change_field(field)
        except (FieldMismatchError, ZeroDivisionError) as exc:
            raise InputError(f"cannot move the form to {field}: {exc}") from exc
    return W, natural_N, source


def _n_homog(args, natural: int, q: int) -> int:
    N = args.n_homog if args.n_homog is not None else natural
    if N < 2:
        raise InputError("--n-homog must be at least 2")
    if q ** N > args.ceiling:
        raise InputError(f"ceiling {args.ceiling} is below q^N = {q ** N}")
    return N


def _max_degree(args, q: int, N: int) -> int:
    d = args.max_degree if args.max_degree is not None else default_cutoff(q)
    if d < N:
        raise InputError(f"--max-degree {d} is below N = {N}")
    return d


# -- serialization ----------------------------------------------------------


def _scalar(field: Field, x):
    re, im = field.format(x)
    return re if im is None else [re, im]


def matrix_json(M: Matrix | None):
    if M is None:
        return None
    return [[_scalar(M.field, x) for x in row] for row in M.to_dense()]


def _input_echo(W: MultilinearForm, source: dict, **extra) -> dict:
    out = dict(source)
    out.update({"q": W.q, "m": W.m, "field": str(W.field), "nonzero": len(W.coords)})
    out.update(extra)
    return out


def regularity_json(rep) -> dict:
    return {
        "slot_nondegenerate": rep.slot_nondegenerate,
        "preregular": rep.preregular,
        "q_matrix": matrix_json(rep.q_matrix),
        "q_unique": rep.q_unique,
        "q_invertible": rep.q_invertible,
        "twist_identity": rep.twist_identity,
        "notes": list(rep.notes),
    }


def _outcome(passed: bool, degrees, **detail) -> dict:
    out = {"status": "pass" if passed else "fail", "degrees": list(degrees)}
    out.update(detail)
    return out


def _skipped(reason: str) -> dict:
    return {"status": "skipped", "reason": reason}


def _homology_json(rep) -> dict:
    return {str(t): h for t, h in sorted(rep.degrees.items())}


# -- commands ---------------------------------------------------------------


def cmd_inspect(args) -> tuple[dict, int]:
    W, natural_N, source = load_input_form(args)
    report = {"command": "inspect", "input": _input_echo(W, source), "valid": True}
    return report, EXIT_PASS


def cmd_check(args) -> tuple[dict, int]:
    W, natural_N, source = load_input_form(args)
    N = _n_homog(args, natural_N, W.q)
    if W.m < N:
        raise InputError(f"form arity m={W.m} is smaller than N={N}")
    cutoff = _max_degree(args, W.q, N)
    P = presentation_from_form(W, N, args.ceiling)
    P.guard(cutoff)
    checks: dict = {}
    t0 = time.perf_counter()

    rep = is_preregular(W)
    checks["preregular"] = _outcome(rep.preregular, [W.m, W.m])
    if W.m == N + 1:
        r3 = is_three_regular(W, N)
        checks["three_regular"] = _outcome(bool(r3.three_regular), [W.m, W.m],
                                           pair_nullspace_dim=r3.pair_nullspace_dim)
    else:
        checks["three_regular"] = _skipped(f"m ≠ N+1 (m={W.m}, N={N}): 3-regularity not defined")

    if rep.preregular:
        sub = w_subcomplex_check(W, N, cutoff)
        checks["w_subcomplex"] = _outcome(
            sub.passed, [0, cutoff],
            contained={str(k): v for k, v in sub.contained.items()},
            equal={str(k): v for k, v in sub.equal.items()}, notes=sub.notes)
    else:
        checks["w_subcomplex"] = _skipped("form is not preregular")

    checks["d_power_N_zero"] = _outcome(dN_zero_check(P, cutoff), [0, cutoff])
    ex = exactness_check(P, cutoff)
    checks["koszul_exactness"] = _outcome(ex.passed, [1, cutoff],
                                          homology=_homology_json(ex), notes=ex.notes)
    g = gorenstein_check(P, W, cutoff)
    checks["gorenstein"] = _outcome(
        g.passed, [1, cutoff], summary=g.summary, global_dimension=g.global_dimension,
        top_dims=g.top_dims,
        resolution=_homology_json(g.resolution),
        dualized=_homology_json(g.dualized),
        plain_transpose=_homology_json(g.plain_transpose),
        reasons=g.reasons)

    passed = all(c["status"] != "fail" for c in checks.values())
    report = {
        "command": "check",
        "input": _input_echo(W, source, N=N, max_degree=cutoff, ceiling=args.ceiling),
        "regularity": regularity_json(rep),
        "hilbert": {"degrees": [0, cutoff], "coefficients": list(hilbert(P, cutoff).coefficients)},
        "dual_dims": {"degrees": [0, cutoff], "dims": dual_dims(P, cutoff)},
        "relations_dim": P.R.dim,
        "implied_global_dimension": implied_global_dimension(N, W.m),
        "checks": checks,
        "passed": passed,
    }
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    return report, EXIT_PASS if passed else EXIT_FAIL


def cmd_orbit(args) -> tuple[dict, int]:
    W, _, source = load_input_form(args)
    if args.L is None:
        raise InputError("orbit needs --L")
    L = matrix_from_json(args.L, W.field)
    if L.field != W.field:
        try:
            L = L.change_field(W.field)
        except (FieldMismatchError, ZeroDivisionError) as exc:
            raise InputError(str(exc)) from exc
    if L.shape != (W.q, W.q):
        raise InputError(f"L must be {W.q}x{W.q}")
    if not is_invertible(L):
        raise InputError("L is singular")
    WL = gl_act(W, L)
    rep, repL = is_preregular(W), is_preregular(WL)
    if rep.preregular and repL.preregular:
        expect = L @ rep.q_matrix @ inverse(L)
        ok = expect == repL.q_matrix
        conj = _outcome(ok, [W.m, W.m], q_matrix=matrix_json(repL.q_matrix))
    else:
        ok = rep.preregular == repL.preregular
        conj = _skipped("form is not preregular") if ok else _outcome(False, [W.m, W.m])
    report = {
        "command": "orbit",
        "input": _input_echo(W, source),
        "form": form_to_json(WL),
        "checks": {"twist_conjugation": conj},
        "passed": ok,
    }
    _write_form(args, WL)
    return report, EXIT_PASS if ok else EXIT_FAIL


def cmd_extract(args) -> tuple[dict, int]:
    if args.m is None:
        raise InputError("extract needs --m")
    if args.presentation is not None:
        if args.form is not None or args.builtin is not None:
            raise InputError("give either --presentation or a form, not both")
        P = presentation_from_json(args.presentation, args.ceiling)
        source = {"presentation": str(args.presentation)}
    else:
        W, natural_N, source = load_input_form(args)
        N = _n_homog(args, natural_N, W.q)
        P = presentation_from_form(W, N, args.ceiling)
    if args.m < P.N:
        raise InputError(f"--m must be at least N = {P.N}")
    P.guard(args.m)
    dim = dual_slice(P, args.m).dim
    echo = dict(source, q=P.q, N=P.N, m=args.m, field=str(P.field))
    report = {"command": "extract", "input": echo, "slice_dim": dim}
    if dim != 1:
        report["passed"] = False
        report["reason"] = f"top dual slice has dimension {dim}, expected 1"
        return report, EXIT_FAIL
    W = extract_top_form(P, args.m)
    report["form"] = form_to_json(W)
    report["passed"] = True
    _write_form(args, W)
    return report, EXIT_PASS


def cmd_hilbert(args) -> tuple[dict, int]:
    if args.presentation is not None:
        P = presentation_from_json(args.presentation, args.ceiling)
        source = {"presentation": str(args.presentation)}
        echo = dict(source, q=P.q, N=P.N, field=str(P.field))
    else:
        W, natural_N, source = load_input_form(args)
        N = _n_homog(args, natural_N, W.q)
        P = presentation_from_form(W, N, args.ceiling)
        echo = _input_echo(W, source, N=N)
    cutoff = args.max_degree if args.max_degree is not None else default_cutoff(P.q)
    P.guard(cutoff)
    echo["max_degree"] = cutoff
    report = {
        "command": "hilbert",
        "input": echo,
        "hilbert": {"degrees": [0, cutoff], "coefficients": list(hilbert(P, cutoff).coefficients)},
        "passed": True,
    }
    return report, EXIT_PASS


def _write_form(args, W: MultilinearForm) -> None:
    if getattr(args, "write", None):
        with open(args.write, "w") as fh:
            json.dump(form_to_json(W), fh, indent=2, sort_keys=True)
            fh.write("\n")


COMMANDS = {
    "inspect": cmd_inspect,
    "check": cmd_check,
    "orbit": cmd_orbit,
    "extract": cmd_extract,
    "hilbert": cmd_hilbert,
}


# -- rendering --------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _md_value(v) -> str:
    if isinstance(v, (dict, list)):
        return "`" + json.dumps(v, sort_keys=True, ensure_ascii=False) + "`"
    return f"`{v}`" if v is not None else "`null`"


def render_markdown(report: dict) -> str:
    lines = [f"# haw {report.get('command', '')}", ""]
    status = report.get("passed")
    if status is not None:
        lines += [f"**Result:** {'PASS' if status else 'FAIL'}", ""]
    for key in sorted(report):
        if key in ("command", "passed"):
            continue
        val = report[key]
        lines.append(f"## {key}")
        lines.append("")
        if key == "checks":
            lines.append("| check | status | degrees | detail |")
            lines.append("|---|---|---|---|")
            for name in sorted(val):
                c = val[name]
                degrees = c.get("degrees")
                span = f"{degrees[0]}..{degrees[1]}" if degrees else ""
                rest = {k: v for k, v in c.items() if k not in ("status", "degrees")}
                detail = c.get("reason") or c.get("summary") or ""
                if not detail and rest:
                    detail = json.dumps(rest, sort_keys=True, ensure_ascii=False)
                lines.append(f"| {name} | {c['status']} | {span} | {detail} |")
        elif isinstance(val, dict):
            for k in sorted(val):
                lines.append(f"- **{k}**: {_md_value(val[k])}")
        else:
            lines.append(f"- {_md_value(val)}")
        lines.append("")
    return "\n".join(lines)


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--form", help="form file (JSON)")
    common.add_argument("--builtin", choices=BUILTINS, help="builtin example form")
    common.add_argument("--q", type=int, help="dimension for symmetric / (super-)Yang-Mills")
    common.add_argument("--angles", nargs=4, metavar="C,S", help='four unit-circle points like "4/5,3/5"')
    common.add_argument("--matrix", help="matrix file for the bilinear builtin")
    common.add_argument("--n-homog", type=int, help="relation degree N")
    common.add_argument("--max-degree", type=int, help="internal degree cutoff")
    common.add_argument("--field", choices=("Q", "Qi", "Fp"), help="override the coefficient field")
    common.add_argument("--p", type=int, help="prime for --field Fp")
    common.add_argument("--ceiling", type=int, default=DEFAULT_CEILING, help="largest q^n allowed")
    common.add_argument("--out", choices=("json", "md"), default="json")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")

    parser = argparse.ArgumentParser(prog="haw", description="Checks for homogeneous algebras attached to multilinear forms.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("inspect", parents=[common], help="validate a form and echo its shape")
    sub.add_parser("check", parents=[common], help="run regularity, Koszul and Gorenstein checks")
    p = sub.add_parser("orbit", parents=[common], help="act on a form by an invertible matrix")
    p.add_argument("--L", help="matrix file for L")
    p.add_argument("--write", help="also write the resulting form to this file")
    p = sub.add_parser("extract", parents=[common], help="extract the top form from a presentation")
    p.add_argument("--presentation", help="presentation file (JSON)")
    p.add_argument("--m", type=int, help="degree of the top dual slice")
    p.add_argument("--write", help="also write the extracted form to this file")
    p = sub.add_parser("hilbert", parents=[common], help="Hilbert series prefix")
    p.add_argument("--presentation", help="presentation file (JSON)")
    return parser


def run(argv=None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ResourceError, PreconditionError, FieldMismatchError) as exc:
        return {"command": args.command, "error": f"{type(exc).__name__}: {exc}", "passed": False}, EXIT_INPUT
    except (ValueError, ZeroDivisionError, StructuralError) as exc:
        return {"command": args.command, "error": f"{type(exc).__name__}: {exc}", "passed": False}, EXIT_INPUT


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    report, code = run(argv)
    text = render_markdown(report) if args.out == "md" else render_json(report)
    sys.stdout.write(text)
    if "error" in report:
        print(report["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
