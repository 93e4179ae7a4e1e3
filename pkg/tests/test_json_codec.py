import json
from fractions import Fraction

import pytest

from cone_cert import Certificate, SearchCaps, certify_membership
from fixtures import disk_cone, pyramid
from ideal_store import ideal_store_exists, load_order_ideal, save_order_ideal
from json_codec import (
    CodecError,
    decode_certificate,
    decode_cone,
    decode_poly,
    decode_polytope,
    decode_rational,
    encode_cone,
    encode_poly,
    encode_polytope,
    encode_verdict,
)
from multipoly import SparsePoly
from order_ideal import OrderIdealGen
from fixtures import polytope_cone

SMALL = SearchCaps(max_degree=4, max_m=8, grid_denominator_cap=64, grid_point_budget=2000)


def test_rationals_are_strings():
    assert decode_rational("7/25") == Fraction(7, 25)
    with pytest.raises(CodecError):
        decode_rational("seven")


def test_polynomial_shape():
    p = SparsePoly.from_expression("7/25 - 6/5*y - y^2", ("x", "y"))
    obj = encode_poly(p, ("x", "y"))
    assert obj["vars"] == ["x", "y"]
    assert {"coeff": "-6/5", "exps": [0, 1]} in obj["terms"]
    assert decode_poly(json.loads(json.dumps(obj))) == p


def test_polytope_from_halfspaces_json():
    obj = {"halfspaces": [{"const": "0", "coeffs": ["1", "0"]},
                          {"const": "0", "coeffs": ["0", "1"]},
                          {"const": "1", "coeffs": ["-1", "-1"]}]}
    K = decode_polytope(obj)
    assert len(K.vertices) == 3
    assert decode_polytope(encode_polytope(pyramid())).vertices == pyramid().vertices
    with pytest.raises(CodecError):
        decode_polytope({})


def test_disk_cone_keeps_its_points():
    cone = decode_cone(json.loads(json.dumps(encode_cone(disk_cone()))))
    assert cone.generators == disk_cone().generators
    assert cone.point_pairs == disk_cone().point_pairs
    verdict = certify_membership(SparsePoly.from_expression("1/5 - y", ("x", "y")), cone, caps=SMALL)
    assert verdict.kind == "refuted"


def test_verdict_shapes():
    cone = polytope_cone("interval")
    member = certify_membership(SparsePoly.from_expression("x^2 - x + 1", ("x",)), cone, caps=SMALL)
    obj = encode_verdict(member)
    assert obj["verdict"] == "Member"
    assert decode_certificate(obj["certificate"]) == member.certificate
    with pytest.raises(CodecError):
        decode_certificate({"terms": [{"exps": [1, 0]}]})


def test_ideal_store_round_trip(tmp_path):
    cone = polytope_cone("interval")
    path = tmp_path / "ideal.json"
    ideal = OrderIdealGen.generate([SparsePoly.from_expression("x^2", ("x",))], cone, SMALL)
    save_order_ideal(path, ideal)
    assert ideal_store_exists(path)
    loaded = load_order_ideal(path, cone, SMALL)
    assert loaded.generators == ideal.generators
    assert loaded.certificates == ideal.certificates


def test_stale_certificates_are_recomputed(tmp_path):
    cone = polytope_cone("interval")
    path = tmp_path / "ideal.json"
    path.write_text(json.dumps({
        "generators": [encode_poly(SparsePoly.from_expression("x^2 - x + 1", ("x",)))],
        "certificates": [{"terms": [{"exps": [2, 0], "coeff": "5"}]}],
    }))
    loaded = load_order_ideal(path, cone, SMALL)
    assert loaded.certificates[0] != Certificate.from_mapping({(2, 0): 5})
    stored = json.loads(path.read_text())
    assert decode_certificate(stored["certificates"][0]) == loaded.certificates[0]
