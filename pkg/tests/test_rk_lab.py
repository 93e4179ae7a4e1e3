import json

import pytest

from rk_lab import main
from tree_builder import create_face_tree
from fixtures import square


@pytest.mark.parametrize("argv, code", [
    (["certify", "--setting", "disk", "7/25 - 6/5*y - y^2"], 0),
    (["certify", "--setting", "disk", "1/5 - y"], 1),
    (["certify", "--setting", "interval", "--max-degree", "1", "x^2 - x + 1"], 2),
    (["certify", "--setting", "toy-r2", "x^2"], 0),
    (["orderunit", "--setting", "disk", "y + 7/5"], 0),
    (["orderunit", "--setting", "disk", "1/5 - y"], 1),
    (["ideal-member", "--setting", "interval", "--generator", "x", "x^2"], 0),
    (["structure", "--polytope", "square"], 0),
    (["structure", "--polytope", "trapezoid"], 1),
    (["cancel", "--setting", "toy-r1", "--u", "1 + x", "--a", "x"], 1),
    (["cancel", "--setting", "interval", "--u", "x", "--a", "x"], 3),
    (["gallery", "square-structure"], 0),
    (["gallery", "no-such-case"], 3),
    (["faces", "--polytope", "pyramid"], 0),
    (["zerofaces", "--polytope", "trapezoid", "--monomial", "1,0,0,0", "--monomial", "0,0,0,1"], 0),
])
def test_exit_codes(argv, code):
    assert main(argv) == code


def test_dominate_json(capsys):
    code = main(["dominate", "--polytope", "square", "--face", "0,0", "--beta", "x + y", "--gamma", "3*x + 2*y", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["M"] == 3
    assert payload["farkas_below"] is not None


def test_decompose_json(capsys):
    code = main(["decompose", "--polytope", "pyramid", "--face", "0,0,1", "--beta", "2 - 2*z", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload["coeffs"].values()) == {"1/2"}


def test_polytope_json_input(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps({"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}))
    assert main(["structure", "--polytope-json", str(path)]) == 0
    assert main(["certify", "--polytope-json", str(path), "x + y"]) == 0


def test_bad_input_exits_three(tmp_path):
    assert main(["certify", "--cone-json", str(tmp_path / "missing.json"), "x"]) == 3
    assert main(["dominate", "--polytope", "square", "--face", "5,5", "--beta", "x", "--gamma", "x"]) == 3


def test_face_tree_has_every_face():
    K = square()
    tree = create_face_tree(K)
    assert len(tree.children("dim_0")) == 4
    assert len(tree.children("dim_1")) == 4


X_JSON = {"vars": ["x"], "terms": [{"coeff": "1", "exps": [1]}]}


def test_polynomial_json_inline():
    assert main(["certify", "--setting", "interval", json.dumps(X_JSON)]) == 0
    assert main(["orderunit", "--setting", "interval", json.dumps(X_JSON)]) == 1


def test_polynomial_json_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(X_JSON))
    assert main(["certify", "--setting", "interval", f"@{path}"]) == 0
    assert main(["cancel", "--setting", "interval", "--u", "1 + x", "--a", f"@{path}"]) == 0


@pytest.mark.parametrize("text", [
    json.dumps({"vars": ["x", "y"], "terms": [{"coeff": "1", "exps": [1, 0]}]}),
    json.dumps({"vars": ["x"], "terms": [{"coeff": "1", "exps": [1, 0]}]}),
    json.dumps({"vars": ["x"]}),
    "{not json",
])
def test_malformed_polynomial_json_exits_three(text):
    assert main(["certify", "--setting", "interval", text]) == 3


def test_missing_polynomial_file_exits_three(tmp_path):
    assert main(["certify", "--setting", "interval", f"@{tmp_path / 'none.json'}"]) == 3


def test_cancel_with_a_negative_product_exits_two():
    assert main(["cancel", "--setting", "interval", "--u", "1 + x", "--a", "x - 1/2"]) == 2


def test_sweep_json_marks_control_rows(capsys):
    code = main(["sweep", "--setting", "interval", "--trials", "2", "--controls", "2", "--max-degree", "4", "--json"])
    assert code == 0
    rows = json.loads(next(line for line in capsys.readouterr().out.splitlines() if line.startswith("[{")))
    assert [row["sample"] for row in rows] == ["positive", "positive", "control", "control"]
    assert [row["conclusion"] for row in rows[2:]] == ["NOT_APPLICABLE", "NOT_APPLICABLE"]
