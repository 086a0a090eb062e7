import json

import pytest

from haw.cli import main, render_markdown, run
from haw.exactlin import Matrix
from haw.fields import Q
from haw.formfile import dump_form, form_from_json
from haw.library import bilinear_form, yang_mills_form


def report(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def write_json(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_check_symplectic(capsys):
    code, out = report(capsys, ["check", "--builtin", "symplectic2"])
    assert code == 0
    data = json.loads(out)
    assert data["hilbert"]["coefficients"] == list(range(1, 12))
    assert data["checks"]["three_regular"]["status"] == "skipped"
    assert "3-regularity not defined" in data["checks"]["three_regular"]["reason"]


def test_check_yang_mills(capsys):
    code, out = report(capsys, ["check", "--builtin", "yang-mills", "--q", "3", "--max-degree", "5"])
    assert code == 0
    assert json.loads(out)["checks"]["three_regular"]["pair_nullspace_dim"] == 1


def test_check_rank_one_bilinear(capsys, tmp_path):
    m = write_json(tmp_path, "b.json", {"rows": [["1", "0"], ["0", "0"]]})
    code, out = report(capsys, ["check", "--builtin", "bilinear", "--matrix", m, "--max-degree", "4"])
    assert code == 1
    data = json.loads(out)
    assert data["dual_dims"]["dims"] == [1, 2, 1, 1, 1]
    assert data["checks"]["w_subcomplex"]["status"] == "skipped"


def test_report_is_deterministic(capsys):
    argv = ["check", "--builtin", "symplectic2", "--max-degree", "4"]
    _, a = report(capsys, argv)
    _, b = report(capsys, argv)
    assert a == b and "timing" not in json.loads(a)
    _, c = report(capsys, argv + ["--timing"])
    assert "timing" in json.loads(c)


def test_every_boolean_check_has_degree_range(capsys):
    _, out = report(capsys, ["check", "--builtin", "yang-mills", "--max-degree", "4"])
    for name, c in json.loads(out)["checks"].items():
        assert c["status"] == "skipped" or "degrees" in c, name


def test_markdown_output(capsys):
    code, out = report(capsys, ["hilbert", "--builtin", "symplectic2", "--max-degree", "3", "--out", "md"])
    assert code == 0 and out.startswith("# haw hilbert") and "[1, 2, 3, 4]" in out


def test_inspect_and_input_errors(capsys, tmp_path):
    good = write_json(tmp_path, "w.json", {"field": "Q", "q": 2, "m": 2,
                                            "entries": [{"idx": [1, 2], "re": "1"}]})
    code, out = report(capsys, ["inspect", "--form", good])
    assert code == 0 and json.loads(out)["input"]["m"] == 2
    dup = write_json(tmp_path, "d.json", {"field": "Q", "q": 2, "m": 2, "entries": [
        {"idx": [1, 2], "re": "1"}, {"idx": [1, 2], "re": "2"}]})
    assert report(capsys, ["inspect", "--form", dup])[0] == 2
    short = write_json(tmp_path, "s.json", {"field": "Q", "q": 2, "m": 2,
                                             "entries": [{"idx": [1], "re": "1"}]})
    assert report(capsys, ["inspect", "--form", short])[0] == 2
    assert report(capsys, ["inspect"])[0] == 2
    assert report(capsys, ["inspect", "--form", str(tmp_path / "missing.json")])[0] == 2


def test_bad_arguments_exit_2(capsys):
    assert main(["check", "--builtin", "nope"]) == 2
    assert report(capsys, ["check", "--builtin", "symplectic2", "--max-degree", "1"])[0] == 2
    assert report(capsys, ["check", "--builtin", "symplectic2", "--field", "Fp"])[0] == 2


def test_resource_ceiling_exit_2(capsys):
    code, out = report(capsys, ["hilbert", "--builtin", "yang-mills", "--max-degree", "9", "--ceiling", "1000"])
    assert code == 2 and "ResourceError" in json.loads(out)["error"]


def test_field_override(capsys):
    code, out = report(capsys, ["check", "--builtin", "yang-mills", "--field", "Fp", "--p", "101",
                                "--max-degree", "5"])
    assert code == 0 and json.loads(out)["input"]["field"] == "F101"


def test_orbit(capsys, tmp_path):
    form = tmp_path / "b.json"
    dump_form(bilinear_form(Matrix.from_dense([[1, 2], [3, 4]], Q)), form)
    ident = write_json(tmp_path, "I.json", {"rows": [["1", "0"], ["0", "1"]]})
    code, out = report(capsys, ["orbit", "--form", str(form), "--L", ident])
    assert code == 0
    assert form_from_json(json.loads(out)["form"]) == form_from_json(form)
    diag = write_json(tmp_path, "D.json", {"rows": [["2", "0"], ["0", "1"]]})
    out_path = tmp_path / "wl.json"
    code, out = report(capsys, ["orbit", "--form", str(form), "--L", diag, "--write", str(out_path)])
    assert code == 0
    WL = form_from_json(out_path)
    assert WL.component(1, 1) == Q.coerce(1) / 4 and WL.component(1, 2) == 1
    assert json.loads(out)["checks"]["twist_conjugation"]["status"] == "pass"
    sing = write_json(tmp_path, "S.json", {"rows": [["1", "1"], ["1", "1"]]})
    assert report(capsys, ["orbit", "--form", str(form), "--L", sing])[0] == 2


def test_orbit_preserves_hilbert(capsys, tmp_path):
    form = tmp_path / "ym.json"
    dump_form(yang_mills_form(Matrix.identity(3, Q)), form)
    L = write_json(tmp_path, "L.json", {"rows": [["1", "2", "0"], ["0", "1", "1"], ["1", "0", "1"]]})
    out_path = tmp_path / "ymL.json"
    assert report(capsys, ["orbit", "--form", str(form), "--L", L, "--write", str(out_path)])[0] == 0
    _, a = report(capsys, ["hilbert", "--form", str(form), "--n-homog", "3", "--max-degree", "6"])
    _, b = report(capsys, ["hilbert", "--form", str(out_path), "--n-homog", "3", "--max-degree", "6"])
    assert json.loads(a)["hilbert"] == json.loads(b)["hilbert"]


def test_extract(capsys, tmp_path):
    code, out = report(capsys, ["extract", "--builtin", "yang-mills", "--m", "4"])
    assert code == 0
    W = form_from_json(json.loads(out)["form"])
    assert W.span() == yang_mills_form(Matrix.identity(3, Q)).span()
    free = write_json(tmp_path, "free.json", {"field": "Q", "q": 2, "N": 2, "relations": []})
    code, out = report(capsys, ["extract", "--presentation", free, "--m", "2"])
    assert code == 1 and json.loads(out)["slice_dim"] == 0
    code, out = report(capsys, ["extract", "--builtin", "symplectic2", "--m", "2"])
    assert code == 0
    assert form_from_json(json.loads(out)["form"]).span() == bilinear_form(
        Matrix.from_dense([[0, 1], [-1, 0]], Q)).span()
