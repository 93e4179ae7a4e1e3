"""
Self-checking gallery of the named examples.

Each case builds its fixture, runs a list of checks and compares every actual
value with the expected one. A case passes only when every check matches.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from colorama import Fore

from cone_cert import (
    Member,
    OrderUnitNo,
    OrderUnitYes,
    Refuted,
    SearchCaps,
    certify_membership,
    is_order_unit,
    verify_certificate,
    zero_propagation_refute,
)
from experiments import run_cancellation_experiment
from fixtures import DISK_MIRROR, DISK_POINT, disk_alpha, disk_cone, polytope_cone, pyramid, square, trapezoid, triangle
from multipoly import SparsePoly
from order_ideal import (
    IdealMember,
    OrderIdealGen,
    dominate_linear,
    face_ideal_generators,
    facet_decompose,
    in_order_ideal,
    relative_order_unit_bound,
    zero_faces,
)
from polytope_geom import LinearForm, face_of
from structure_check import SimplexProductWitness, recognize_simplex_product, simple_vertex_check
from toy_rings import toy_in_order_ideal, toy_order_unit, toy_r1_member, toy_r2_member
from utils import agent_print, get_logger

logger = get_logger("gallery")


class GalleryError(ValueError):
    """Unknown gallery case"""


@dataclass(frozen=True)
class Check:
    label: str
    expected: object
    run: Callable[[SearchCaps], object]
    note: str = ""


@dataclass(frozen=True)
class CheckOutcome:
    label: str
    expected: object
    actual: object
    note: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class GalleryResult:
    name: str
    description: str
    outcomes: Tuple[CheckOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(o.ok for o in self.outcomes)


@dataclass(frozen=True)
class GalleryCase:
    name: str
    description: str
    checks: Callable[[], List[Check]]


def _x() -> SparsePoly:
    return SparsePoly.variable(1, 0)


def _poly(text: str, variables=("x", "y")) -> SparsePoly:
    return SparsePoly.from_expression(text, variables)


def _kind(verdict) -> str:
    return verdict.kind


# -- toy rings ---------------------------------------------------------------

def _toy_r1_checks() -> List[Check]:
    x = _x()
    return [
        Check("x(1+x) is positive in R1", True, lambda caps: toy_r1_member(x * (x + 1)), "multiplying by 1 + x makes x positive"),
        Check("1 + x is an order unit", True, lambda caps: toy_order_unit(x + 1), "strictly positive on [0, 1]"),
        Check("x is not positive in R1", False, lambda caps: toy_r1_member(x), "cancellation fails"),
        Check(
            "cancellation experiment u = 1 + x, a = x",
            "FAIL_REFUTED",
            lambda caps: run_cancellation_experiment("toy-r1", x + 1, x, caps, verbose=False).conclusion,
        ),
    ]


def _toy_r2_checks() -> List[Check]:
    x = _x()
    return [
        Check("x^2 is positive in R2", True, lambda caps: toy_r2_member(x ** 2), "valuation 2 is allowed"),
        Check("x is not positive in R2", False, lambda caps: toy_r2_member(x), "valuation 1 is excluded"),
        Check(
            "M·x^2 − x rejected for every M up to the cap",
            True,
            lambda caps: all(not toy_r2_member(x ** 2 * M - x) for M in range(1, caps.max_m + 1)),
        ),
        Check("x^3 lies in the order ideal of x^2", True, lambda caps: toy_in_order_ideal(x ** 3, x ** 2, "r2", caps.max_m).member),
        Check("x does not lie in the order ideal of x^2", False, lambda caps: toy_in_order_ideal(x, x ** 2, "r2", caps.max_m).member),
        Check(
            "cancellation experiment u = 1 + x, a = x^2",
            "PASS",
            lambda caps: run_cancellation_experiment("toy-r2", x + 1, x ** 2, caps, verbose=False).conclusion,
        ),
    ]


# -- disk ----------------------------------------------------------------------

def _disk_checks() -> List[Check]:
    cone = disk_cone()
    beta = _poly("1/5 - y")
    u = _poly("y + 7/5")
    x = _poly("x")

    def identity(caps):
        return beta * u == disk_alpha() + x * x + x.scale(Fraction(6, 5))

    def unit_margin(caps):
        verdict = is_order_unit(u, cone, caps)
        return verdict.margin if isinstance(verdict, OrderUnitYes) else verdict.verdict

    def product_certificate(caps):
        verdict = certify_membership(beta * u, cone, 2, caps)
        return isinstance(verdict, Member) and verify_certificate(beta * u, verdict.certificate, cone)

    def beta_refuted(caps):
        return zero_propagation_refute(beta, cone, DISK_POINT, DISK_MIRROR).kind

    def beta_not_unit(caps):
        verdict = is_order_unit(beta, cone, caps)
        return verdict.witness if isinstance(verdict, OrderUnitNo) else verdict.verdict

    return [
        Check("(1/5 − y)(y + 7/5) = α + x^2 + 6/5 x", True, identity, "exact polynomial identity"),
        Check("y + 7/5 is an order unit with margin 7/5", Fraction(7, 5), unit_margin, "no zero on the admissible region"),
        Check("u·β certifies at degree ≤ 2", True, product_certificate),
        Check("β = 1/5 − y refuted by zero propagation", "refuted", beta_refuted, "(0, 1/5) forces (0, −7/5)"),
        Check("β is not an order unit", DISK_POINT, beta_not_unit, "vanishes only at (0, 1/5)"),
    ]


def _disk_ideal_checks() -> List[Check]:
    cone = disk_cone()
    t = disk_alpha() + _poly("x^2 + 6/5*x")

    def member(r):
        def run(caps):
            ideal = OrderIdealGen.generate([t], cone, caps)
            verdict = in_order_ideal(r, ideal, caps=caps)
            return verdict.M if isinstance(verdict, IdealMember) else verdict.kind
        return run

    def y_refuted(caps):
        return _kind(certify_membership(t - _poly("y"), cone, 2, caps))

    return [
        Check("x lies in the order ideal of α + x^2 + 6/5 x", 1, member(_poly("x"))),
        Check("α lies in the order ideal of α + x^2 + 6/5 x", 1, member(disk_alpha())),
        Check("t − y is refuted at (0, 1/5)", "refuted", y_refuted, "y does not vanish where t does"),
    ]


# -- polytopes -----------------------------------------------------------------

def _trapezoid_checks() -> List[Check]:
    K = trapezoid()
    fx = K.index_of(LinearForm.of(0, (1, 0)))
    fslant = K.index_of(LinearForm.of(2, (-1, -1)))

    def facets(caps):
        return tuple(f.format() for f in K.facet_forms)

    def empty_meet(caps):
        face = face_of(K, [fx, fslant])
        return face.is_empty, face.flat.point, face.flat.dimension

    def zero_set(caps):
        w = [[int(i == fx) for i in range(K.num_facets)], [int(i == fslant) for i in range(K.num_facets)]]
        zs = zero_faces(K, w)
        return len(zs.faces), tuple(flat.point for flat in zs.flats)

    def domination(caps):
        G = K.vertex_face((0, 0))
        return dominate_linear(K, G, LinearForm.of(0, (1, 1)), LinearForm.of(0, (1, 0))).M

    return [
        Check("facet forms", ("x", "y", "-y + 1", "-x - y + 2"), facets),
        Check("x and 2 − x − y meet outside K", (True, (Fraction(0), Fraction(2)), 0), empty_meet, "single point outside K"),
        Check("zero set of ⟨x, 2 − x − y⟩", (0, ((Fraction(0), Fraction(2)),)), zero_set, "not an order ideal"),
        Check("x + y dominates x at the origin with M = 1", 1, domination),
        Check("not a product of simplices", "no positive solution", lambda caps: getattr(recognize_simplex_product(K), "reason", "product")),
    ]


def _pyramid_checks() -> List[Check]:
    K = pyramid()
    apex = (0, 0, 1)

    def apex_facets(caps):
        ideal = face_ideal_generators(K, K.vertex_face(apex))
        return tuple(f.format(("x", "y", "z")) for f in ideal.forms), ideal.order_unit.format(("x", "y", "z"))

    def decomposition(caps):
        return tuple(facet_decompose(K, K.vertex_face(apex), LinearForm.of(2, (0, 0, -2))).values())

    def relative_unit(caps):
        return relative_order_unit_bound(K, K.vertex_face(apex), LinearForm.of(2, (0, 0, -2)))

    def opposite_meet(caps):
        face = face_of(K, [K.index_of(LinearForm.of(1, (-1, 0, -1))), K.index_of(LinearForm.of(1, (1, 0, -1)))])
        return face.dimension, face.flat.dimension

    def simple(caps):
        report = simple_vertex_check(K)
        return report.simple, tuple(K.vertices[j] for j, _ in report.offending)

    half = Fraction(1, 2)
    return [
        Check(
            "facets through the apex",
            (("-x - z + 1", "x - z + 1", "-y - z + 1", "y - z + 1"), "-4*z + 4"),
            apex_facets,
        ),
        Check("2 − 2z splits evenly over the slanted facets", (half, half, half, half), decomposition),
        Check("opposite slanted pair is a relative order unit with M = 2", 2, relative_unit),
        Check("opposite slanted facets meet in the apex, their flats in a line", (0, 1), opposite_meet),
        Check("apex is not a simple vertex", (False, ((Fraction(0), Fraction(0), Fraction(1)),)), simple),
        Check("not a product of simplices", "no positive solution", lambda caps: getattr(recognize_simplex_product(K), "reason", "product")),
    ]


def _square_checks() -> List[Check]:
    K = square()

    def witness(caps):
        found = recognize_simplex_product(K)
        if not isinstance(found, SimplexProductWitness):
            return found.reason
        return tuple(tuple(K.facet_forms[i].format() for i in cls) for cls in found.classes), found.coeffs

    def origin_ideal(caps):
        return face_ideal_generators(K, K.vertex_face((0, 0))).order_unit.format()

    def domination(caps):
        return dominate_linear(K, K.vertex_face((0, 0)), LinearForm.of(0, (1, 1)), LinearForm.of(0, (3, 2))).M

    def cross_zero_set(caps):
        zs = zero_faces(K, [[1, 1, 0, 0]])
        return tuple(sorted(tuple(sorted(f.facets)) for f in zs.faces))

    one = Fraction(1)
    return [
        Check("product witness", ((("x", "-x + 1"), ("y", "-y + 1")), ((one, one), (one, one))), witness),
        Check("face ideal of the origin", "x + y", origin_ideal),
        Check("x + y dominates 3x + 2y with M = 3", 3, domination),
        Check("zero set of ⟨x·y⟩ is the two edges", ((0,), (1,)), cross_zero_set),
        Check("every vertex is simple", True, lambda caps: simple_vertex_check(K).simple),
    ]


def _triangle_checks() -> List[Check]:
    K = triangle()

    def witness(caps):
        found = recognize_simplex_product(K)
        return found.coeffs if isinstance(found, SimplexProductWitness) else found.reason

    def edge_ideal(caps):
        edge = K.face_containing([(0, 0), (0, 1)])
        return face_ideal_generators(K, edge).order_unit.format()

    one = Fraction(1)
    return [
        Check("single class with unit coefficients", ((one, one, one),), witness),
        Check("face ideal of the edge x = 0", "x", edge_ideal),
        Check(
            "x^2 − x + 1 certifies over the interval",
            "member",
            lambda caps: _kind(certify_membership(_poly("x^2 - x + 1", ("x",)), polytope_cone("interval"), 2, caps)),
        ),
    ]


CASES: Dict[str, GalleryCase] = {
    case.name: case
    for case in [
        GalleryCase("toy-r1", "toy ordering R1: cancellation fails", _toy_r1_checks),
        GalleryCase("toy-r2", "toy ordering R2: cancellation holds", _toy_r2_checks),
        GalleryCase("disk", "disk cone counter-example", _disk_checks),
        GalleryCase("disk-ideal", "order ideal of (1/5 − y)(y + 7/5) in the disk cone", _disk_ideal_checks),
        GalleryCase("trapezoid", "trapezoid: non-order-ideal zero set", _trapezoid_checks),
        GalleryCase("pyramid", "square-base pyramid: non-simple apex", _pyramid_checks),
        GalleryCase("square-structure", "unit square as Δ1 × Δ1", _square_checks),
        GalleryCase("triangle-structure", "triangle as Δ2", _triangle_checks),
    ]
}


def run_case(name: str, caps: Optional[SearchCaps] = None, verbose: bool = True) -> GalleryResult:
    if name not in CASES:
        raise GalleryError(f"Unknown gallery case: {name}. Known: {', '.join(CASES)}")
    caps = caps or SearchCaps.from_config()
    case = CASES[name]
    if verbose:
        agent_print("Gallery", f"Running {name}: {case.description}", Fore.CYAN)
    outcomes = []
    for check in case.checks():
        try:
            actual = check.run(caps)
        except Exception as e:  # a crash is a mismatch, not an abort
            logger.exception("gallery check %s/%s raised", name, check.label)
            actual = f"error: {e}"
        outcome = CheckOutcome(check.label, check.expected, actual, check.note)
        if verbose:
            color = Fore.GREEN if outcome.ok else Fore.RED
            agent_print("Gallery", f"{'ok  ' if outcome.ok else 'FAIL'} {check.label}", color)
        outcomes.append(outcome)
    return GalleryResult(name, case.description, tuple(outcomes))


def run_gallery(names: Optional[List[str]] = None, caps: Optional[SearchCaps] = None, verbose: bool = True) -> List[GalleryResult]:
    return [run_case(name, caps, verbose) for name in (names or list(CASES))]
