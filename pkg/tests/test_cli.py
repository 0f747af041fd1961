import json

import pytest

from gtlab.cli import main
from gtlab.diagram import EDGES, NODES, emit_diagram
from gtlab.sequences import EPDFun, UPSet, from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def test_morphism_check_passes(capsys):
    code, out, _ = run(capsys, "morphism", "check", "p_to_a", "--samples", "1000", "--seed", "7")
    assert code == 0 and "passed" in out


def test_morphism_check_broken_exits_one(capsys):
    code, out, _ = run(capsys, "morphism", "check", "b_to_d_no_shift", "--samples", "50", "--json")
    report = json.loads(out)
    assert code == 1 and report["passed"] is False and report["violations"]


def test_json_is_deterministic_and_round_trips(capsys):
    _, a, _ = run(capsys, "morphism", "check", "p_to_a_zero_flip", "--samples", "40", "--seed", "3", "--json")
    _, b, _ = run(capsys, "morphism", "check", "p_to_a_zero_flip", "--samples", "40", "--seed", "3", "--json")
    assert a == b
    for pair in json.loads(a)["violations"]:
        for obj in pair:
            assert from_json(obj).to_json() == obj


def test_unions_demo_footnote(capsys):
    code, out, _ = run(capsys, "unions", "demo", "--grid", "footnote", "--K", "3", "--R", "2", "--M", "2")
    assert code == 0
    assert "E_0^0 not inside E_1^0" in out and "E_1^0 not inside E_0^1" in out


def test_unions_demo_random_json(capsys):
    code, out, _ = run(capsys, "unions", "demo", "--grid", "random", "--N", "20", "--seed", "5", "--json")
    assert code == 0 and json.loads(out)["passed"]


def test_diag_bound(capsys, files):
    path = files("family.json", [EPDFun.const(0).to_json()])
    code, out, _ = run(capsys, "diag", "bound", "--input", path)
    assert code == 0 and from_json(json.loads(out)) == EPDFun.const(0)


def test_diag_escape_and_split(capsys, files):
    path = files("sets.json", [UPSet((), (1, 0)).to_json(), UPSet.residues(4, [0]).to_json()])
    code, out, _ = run(capsys, "diag", "escape", "--input", path, "--steps", "5", "--json")
    assert code == 0 and json.loads(out)["escape"] == [0, 4, 8, 12, 16]
    code, out, _ = run(capsys, "diag", "split", "--input", path, "--json")
    assert code == 0 and json.loads(out)["splits_all"]


def test_diag_side(capsys, files):
    path = files("pair.json", {"v": UPSet((), (1, 0)).to_json(), "x": UPSet((), (0, 1)).to_json()})
    assert run(capsys, "diag", "side", "--input", path)[1] == "right\n"
    path = files("bad.json", {"v": UPSet((), (1, 0)).to_json(), "x": UPSet.residues(4, [0]).to_json()})
    assert run(capsys, "diag", "side", "--input", path)[0] == 2


def test_relations_verbs(capsys, files):
    code, out, _ = run(capsys, "relations", "list", "--json")
    assert code == 0 and len(json.loads(out)["relations"]) == 9
    path = files("ev.json", {"challenge": EPDFun.identity().to_json(), "response": EPDFun.const(7).to_json()})
    assert run(capsys, "relations", "eval", "b", "--input", path)[1] == "b: False\n"
    evens, fours = UPSet((), (1, 0)).to_json(), UPSet.residues(4, [0]).to_json()
    path = files("w.json", {"psi": evens, "family": [fours]})
    assert run(capsys, "relations", "witness", "s", "--input", path)[0] == 1
    path = files("w2.json", {"psi": fours, "family": [evens, UPSet.omega().to_json()]})
    assert run(capsys, "relations", "witness", "p", "--input", path)[0] == 0


def test_usage_and_input_errors(capsys, files, tmp_path):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "morphism", "check", "nope")[0] == 2
    assert run(capsys, "morphism", "check", "p_to_a", "--samples", "0")[0] == 2
    assert run(capsys, "diag", "bound", "--input", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "diag", "bound", "--input", str(bad))[0] == 2
    assert run(capsys, "diag", "bound", "--input", files("e.json", []))[0] == 2
    assert run(capsys, "diag", "bound", "--input", files("s.json", [UPSet.omega().to_json()]))[0] == 2
    assert run(capsys, "diag", "bound", "--input", files("m.json", [{"head": [], "base": 1}]))[0] == 2
    assert run(capsys, "relations", "eval", "b", "--input", files("x.json", {"challenge": {"head": [], "period": [1]}, "response": EPDFun.const(1).to_json()}))[0] == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "diagram.dot"
    assert run(capsys, "diagram", "--format", "dot", "--output", str(target))[0] == 0
    assert target.read_text() == emit_diagram("dot")


def test_diagram_contents():
    dot = emit_diagram("dot")
    assert 'p -> a [label="complement-morphism"' in dot
    data = json.loads(emit_diagram("json"))
    assert len(data["edges"]) == 8 and len(EDGES) == 8
    assert set(data["nodes"]) == set(NODES) == set("sptabdrui")
    assert {(e["source"], e["target"]) for e in data["edges"]} == {
        ("s", "p"), ("p", "t"), ("p", "a"), ("p", "b"), ("b", "d"), ("b", "r"), ("r", "u"), ("r", "i")
    }
    pb = next(e for e in data["edges"] if (e["source"], e["target"]) == ("p", "b"))
    assert pb["external"] and pb["mechanism"] == "external-construction"
    with pytest.raises(ValueError):
        emit_diagram("svg")
