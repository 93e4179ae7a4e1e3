"""
JSON shapes for every value the CLI reads or prints.

Rationals are strings "p/q" (or "p"). Polynomials are
{"vars": [...], "terms": [{"coeff": "7/25", "exps": [0, 0]}, ...]}.
"""

import json
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from cone_cert import (
    Certificate,
    GeneratedCone,
    Inconclusive,
    Member,
    NotFoundUpTo,
    OrderUnitNo,
    OrderUnitUnknown,
    OrderUnitYes,
    Refuted,
)
from exact_linalg import format_rational, to_rational
from multipoly import SparsePoly, default_variables
from polytope_geom import AffineFlat, Face, LinearForm, Polytope, from_halfspaces, from_vertices


class CodecError(ValueError):
    """Malformed JSON input"""


def encode_rational(value) -> str:
    return format_rational(value)


def decode_rational(text) -> Fraction:
    try:
        return to_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise CodecError(f"not a rational: {text!r}") from e


def encode_point(point: Sequence) -> list:
    return [encode_rational(v) for v in point]


def decode_point(items: Sequence) -> tuple:
    return tuple(decode_rational(v) for v in items)


def encode_poly(p: SparsePoly, variables: Optional[Sequence[str]] = None) -> Dict[str, Any]:
    return {
        "vars": list(variables or default_variables(p.nvars)),
        "terms": [{"coeff": encode_rational(c), "exps": list(e)} for e, c in p.terms.items()],
    }


def decode_poly(obj: Dict[str, Any]) -> SparsePoly:
    try:
        nvars = len(obj["vars"])
        return SparsePoly(nvars, {tuple(t["exps"]): decode_rational(t["coeff"]) for t in obj["terms"]})
    except (KeyError, TypeError) as e:
        raise CodecError(f"malformed polynomial: {e}") from e


def encode_form(form: LinearForm) -> Dict[str, Any]:
    return {"const": encode_rational(form.constant), "coeffs": [encode_rational(c) for c in form.coeffs]}


def decode_form(obj: Dict[str, Any]) -> LinearForm:
    try:
        return LinearForm.of(decode_rational(obj["const"]), [decode_rational(c) for c in obj["coeffs"]])
    except (KeyError, TypeError) as e:
        raise CodecError(f"malformed linear form: {e}") from e


def encode_polytope(K: Polytope) -> Dict[str, Any]:
    return {
        "vertices": [encode_point(v) for v in K.vertices],
        "halfspaces": [encode_form(f) for f in K.facet_forms],
    }


def decode_polytope(obj: Dict[str, Any]) -> Polytope:
    if "vertices" in obj:
        return from_vertices(decode_point(p) for p in obj["vertices"])
    if "halfspaces" in obj:
        return from_halfspaces(decode_form(f) for f in obj["halfspaces"])
    raise CodecError('polytope JSON needs "vertices" or "halfspaces"')


def encode_flat(flat: AffineFlat) -> Optional[Dict[str, Any]]:
    if flat.is_empty:
        return None
    return {"point": encode_point(flat.point), "directions": [encode_point(d) for d in flat.directions]}


def encode_face(face: Face) -> Dict[str, Any]:
    return {
        "facets": sorted(face.facets),
        "vertices": [encode_point(v) for v in face.vertices],
        "dimension": face.dimension,
        "interior_point": encode_point(face.interior_point) if face.interior_point else None,
        "flat": encode_flat(face.flat),
    }


def encode_certificate(cert: Certificate) -> Dict[str, Any]:
    return {"terms": [{"exps": list(e), "coeff": encode_rational(c)} for e, c in cert.terms]}


def decode_certificate(obj: Dict[str, Any]) -> Certificate:
    try:
        return Certificate.from_mapping({tuple(t["exps"]): decode_rational(t["coeff"]) for t in obj["terms"]})
    except (KeyError, TypeError) as e:
        raise CodecError(f"malformed certificate: {e}") from e


def encode_cone(cone: GeneratedCone) -> Dict[str, Any]:
    return {
        "name": cone.name,
        "generators": [encode_poly(g, cone.variables) for g in cone.generators],
        "labels": list(cone.labels),
        "points": [encode_point(p) for p in cone.points],
        "point_pairs": [[encode_point(p), encode_point(q)] for p, q in cone.point_pairs],
    }


def decode_cone(obj: Dict[str, Any]) -> GeneratedCone:
    if "polytope" in obj:
        return GeneratedCone.from_polytope(decode_polytope(obj["polytope"]), name=obj.get("name", ""))
    try:
        generators = [decode_poly(g) for g in obj["generators"]]
    except KeyError as e:
        raise CodecError('cone JSON needs "generators" or "polytope"') from e
    variables = tuple(obj["generators"][0]["vars"]) if generators else ()
    return GeneratedCone.of(
        generators,
        nvars=len(variables) or None,
        points=[decode_point(p) for p in obj.get("points", [])],
        point_pairs=[(decode_point(p), decode_point(q)) for p, q in obj.get("point_pairs", [])],
        labels=tuple(obj.get("labels", ())),
        variables=variables,
        name=obj.get("name", ""),
    )


def encode_verdict(verdict) -> Dict[str, Any]:
    if isinstance(verdict, Member):
        return {"verdict": "Member", "degree": verdict.degree, "certificate": encode_certificate(verdict.certificate)}
    if isinstance(verdict, NotFoundUpTo):
        return {
            "verdict": "NotFoundUpTo",
            "degree": verdict.degree,
            "refutations": [
                {"degree": d, "functional": [{"exps": list(e), "value": encode_rational(y)} for e, y in functional]}
                for d, functional in verdict.refutations
            ],
        }
    if isinstance(verdict, Refuted):
        return {
            "verdict": "Refuted",
            "rule": verdict.rule,
            "witness": [encode_point(p) for p in verdict.witness],
            "values": [encode_rational(v) for v in verdict.values],
        }
    if isinstance(verdict, Inconclusive):
        return {"verdict": "Inconclusive", "reason": verdict.reason}
    if isinstance(verdict, OrderUnitYes):
        return {
            "verdict": "Yes",
            "margin": encode_rational(verdict.margin),
            "degree": verdict.degree,
            "certificate": encode_certificate(verdict.certificate),
        }
    if isinstance(verdict, OrderUnitNo):
        return {"verdict": "No", "witness": encode_point(verdict.witness), "value": encode_rational(verdict.value)}
    if isinstance(verdict, OrderUnitUnknown):
        return {"verdict": "Unknown", "max_degree": verdict.caps.max_degree}
    raise CodecError(f"no JSON shape for {type(verdict).__name__}")


def encode_structure(result) -> Dict[str, Any]:
    if hasattr(result, "classes"):
        return {
            "classes": [list(c) for c in result.classes],
            "coeffs": [[encode_rational(a) for a in row] for row in result.coeffs],
        }
    return {"not_product": result.reason, "detail": result.detail}


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)
