import json
import sys
from pathlib import Path

import pytest

from dblcat import __version__
from dblcat.cli import main
from dblcat.core import DoubleScheme, discrete_category, ordinal
from dblcat.formats import encode, load_value, store
from dblcat.zoo import free_on_edges

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "fixtures"))
import make_fixtures  # noqa: E402


@pytest.fixture(scope="module")
def fx(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures")
    make_fixtures.main(out)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv] + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_fixtures_in_repo_are_current(fx):
    here = Path(__file__).resolve().parent.parent / "fixtures"
    for p in fx.iterdir():
        assert (here / p.name).read_text() == p.read_text(), p.name


def test_report_carries_version_and_budget(capsys, fx):
    code, rep = run(capsys, "validate", fx / "terminal.dc")
    assert code == 0
    assert rep["version"] == __version__ and rep["tool"] == "dblcat"
    assert set(rep["budget"]) == {"max_cells", "max_path", "max_squares"}
    assert rep["exit_code"] == 0


def test_human_output_has_report_block(capsys, fx):
    assert main(["allowable", str(fx / "grid2x2.arr")]) == 0
    out = capsys.readouterr().out
    assert "--- report" in out
    json.loads(out.split("--- report\n", 1)[1])


def test_check_weak_equivalence(capsys, fx):
    assert run(capsys, "check", "--we", "tau", fx / "H_I_to_1.dc")[0] == 0
    assert run(capsys, "check", "--we", "--topology", "tauprime", fx / "V_I_to_1.dc")[0] == 1


def test_check_cofibrant(capsys, fx):
    code, rep = run(capsys, "check", "--cofibrant", "tauprime", fx / "noreedy.dc")
    assert code == 1 and rep["topology"] == "tau_prime"
    assert run(capsys, "check", "--cofibrant", "trivial", fx / "noreedy.dc")[0] == 0


def test_allowable(capsys, fx):
    assert run(capsys, "allowable", fx / "pinwheel.sub")[0] == 1
    assert run(capsys, "allowable", fx / "grid2x2.arr")[0] == 0


def test_pushout_formula_and_generic(capsys, fx):
    for mode in ("--formula", "--generic"):
        code, rep = run(capsys, "pushout", mode, "point-into-I", "--c", "[0]", fx / "terminal.dc",
                        fx / "point_into_I_map.dc")
        assert code == 0
        assert rep["sizes"]["objects"] == 2


def test_compose_arrangement(capsys, fx):
    code, rep = run(capsys, "compose-arrangement", fx / "comm2.dc", fx / "grid2x2.arr")
    assert code == 0
    assert json.dumps(rep).count("[0, 2]") >= 1


def test_segal_compare(capsys, fx):
    assert run(capsys, "segal-compare", fx / "noreedy.dc")[0] == 1
    assert run(capsys, "segal-compare", fx / "square.dc")[0] == 0


def test_constructions_write_documents(capsys, fx, tmp_path):
    out = tmp_path / "t.dc"
    code, rep = run(capsys, "transpose", fx / "square.dc", "-o", out)
    assert code == 0 and rep["output"] == str(out)
    assert len(load_value(str(out)).objects) == 4
    code, rep = run(capsys, "product", fx / "square.dc", fx / "terminal.dc")
    assert code == 0 and rep["sizes"]["objects"] == 4
    code, rep = run(capsys, "nerve", "--horizontal", "--level", "3", fx / "square.dc")
    assert code == 0
    assert run(capsys, "nerve", "--double", "--level", "1", fx / "square.dc")[0] == 0
    assert run(capsys, "nerve", "--diag", "--level", "2", fx / "square.dc")[0] == 0
    assert run(capsys, "coskeletal", "--n", "3", fx / "noreedy.dc")[0] == 0
    assert run(capsys, "categorify", "--h", fx / "nerve_I.tr")[0] == 0
    assert run(capsys, "categorify", "--sset", fx / "nerve_I.tr")[0] == 0
    assert run(capsys, "replace", "--topology", "tauprime", fx / "square.dc")[0] == 0
    assert run(capsys, "iso", fx / "square.dc", fx / "square.dc")[0] == 0
    assert run(capsys, "iso", fx / "square.dc", fx / "terminal.dc")[0] == 1
    assert run(capsys, "hom", fx / "terminal.dc", fx / "square.dc")[0] == 0


def test_sd2_sizes(capsys):
    code, rep = run(capsys, "sd2", "--simplex", "1")
    assert code == 0 and rep["sizes"]["objects"] == 5
    assert run(capsys, "sd2", "--horn", "2", "1")[0] == 0
    assert run(capsys, "sd2", "--boundary", "2", "--box", "1")[0] == 0


def test_free_and_quotient(capsys, tmp_path):
    H = free_on_edges([0, 1], {"f": (0, 1), "g": (0, 1)})
    V = discrete_category([0, 1])
    path = tmp_path / "s.scheme"
    store(encode(DoubleScheme(H, V, {"s": ("f", "g", V.ident[0], V.ident[1])})), str(path))
    code, rep = run(capsys, "free", path)
    assert code == 0 and rep["sizes"]["squares"] == 5
    cat = tmp_path / "c.cat"
    store(encode(ordinal(1)), str(cat))
    assert run(capsys, "quotient", cat)[0] == 0


def test_budget_exceeded_names_the_bound(capsys, tmp_path):
    one = ordinal(0)
    path = tmp_path / "loop.scheme"
    store(encode(DoubleScheme(one, one, {"a": ((0, 0), (0, 0), (0, 0), (0, 0))})), str(path))
    code, rep = run(capsys, "free", path, "--max-squares", "20")
    assert code == 2
    assert rep["error"]["bound"] == "max_squares"


def test_budget_from_environment(capsys, fx, monkeypatch):
    monkeypatch.setenv("DBLCAT_BUDGET", "max_squares=77")
    assert run(capsys, "validate", fx / "terminal.dc")[1]["budget"]["max_squares"] == 77
    monkeypatch.setenv("DBLCAT_BUDGET", "nonsense=1")
    assert main(["validate", str(fx / "terminal.dc")]) == 2


def test_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.dc"
    bad.write_text("{not json")
    code, rep = run(capsys, "validate", bad)
    assert code == 2 and "line 1" in rep["error"]["message"]
    assert run(capsys, "validate", tmp_path / "missing.dc")[0] == 2


def test_structurally_invalid_document_exits_1(capsys, tmp_path):
    doc = encode(ordinal(1))
    doc.payload["composition"] = []
    path = tmp_path / "broken.cat"
    store(doc, str(path))
    assert run(capsys, "validate", path)[0] == 1


def test_runs_are_deterministic(capsys, fx):
    a = run(capsys, "nerve", "--horizontal", "--level", "2", fx / "noreedy.dc")
    b = run(capsys, "nerve", "--horizontal", "--level", "2", fx / "noreedy.dc")
    assert a == b
