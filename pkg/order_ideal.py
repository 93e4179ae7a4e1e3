"""
Order ideals presented by positive generators.

r lies in the order ideal ⟨T⟩ when −M·Σt ≤ r ≤ M·Σt for some positive integer
M, i.e. both M·Σt − r and M·Σt + r have cone certificates. Everything here is a
bounded search on top of cone_cert; a failed search makes no negative claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as choices_of
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple, Union

from cone_cert import (
    Certificate,
    GeneratedCone,
    Member,
    OrderUnitYes,
    PreconditionError,
    SearchCaps,
    certify_membership,
    is_order_unit,
    verify_certificate,
)
from exact_linalg import LPProblem, Vector, interior_solution, lp_solve
from multipoly import SparsePoly
from polytope_geom import AffineFlat, Face, LinearForm, Polytope, face_of, facets_containing
from utils import get_logger

logger = get_logger("ideal")


class OrderIdealError(ValueError):
    """Base error for order ideal computations"""


class NotPositiveError(OrderIdealError):
    def __init__(self, generator: SparsePoly, verdict):
        super().__init__(f"generator {generator} has no cone certificate ({verdict.kind})")
        self.generator = generator
        self.verdict = verdict


class NotOrderUnitError(OrderIdealError):
    def __init__(self, u: SparsePoly, verdict):
        super().__init__(f"{u} is not a confirmed order unit (verdict {verdict.verdict})")
        self.u = u
        self.verdict = verdict


@dataclass(frozen=True)
class OrderIdealGen:
    """⟨T⟩ for a finite positive T, each generator stored with its certificate."""
    generators: Tuple[SparsePoly, ...]
    certificates: Tuple[Certificate, ...]
    cone: GeneratedCone

    def __post_init__(self):
        if not self.generators:
            raise OrderIdealError("an order ideal needs at least one generator")
        if len(self.generators) != len(self.certificates):
            raise OrderIdealError("one certificate per generator is required")
        for t, cert in zip(self.generators, self.certificates):
            if not verify_certificate(t, cert, self.cone):
                raise NotPositiveError(t, Member(cert, cert.degree))

    @classmethod
    def generate(cls, generators: Sequence[SparsePoly], cone: GeneratedCone, caps: Optional[SearchCaps] = None) -> "OrderIdealGen":
        certificates = []
        for t in generators:
            verdict = certify_membership(t, cone, caps=caps)
            if not isinstance(verdict, Member):
                raise NotPositiveError(t, verdict)
            certificates.append(verdict.certificate)
        return cls(tuple(generators), tuple(certificates), cone)

    @property
    def order_unit(self) -> SparsePoly:
        """Σ T, a relative order unit of the ideal."""
        total = SparsePoly.zero(self.cone.nvars)
        for t in self.generators:
            total = total + t
        return total


@dataclass(frozen=True)
class IdealMember:
    M: int
    upper: Certificate
    lower: Certificate

    kind = "member"


@dataclass(frozen=True)
class IdealNotFound:
    M_cap: int
    degree_cap: int
    probes: Tuple[Tuple[int, str, str], ...] = ()

    kind = "not-found"


def escalation(M_cap: int) -> List[int]:
    values, M = [], 1
    while M <= M_cap:
        values.append(M)
        M *= 2
    if values[-1] != M_cap:
        values.append(M_cap)
    return values


def in_order_ideal(
    r: SparsePoly,
    ideal: OrderIdealGen,
    M_cap: Optional[int] = None,
    degree_cap: Optional[int] = None,
    caps: Optional[SearchCaps] = None,
) -> Union[IdealMember, IdealNotFound]:
    caps = caps or SearchCaps.from_config()
    M_cap = caps.max_m if M_cap is None else M_cap
    degree_cap = caps.max_degree if degree_cap is None else degree_cap
    if M_cap < 1 or degree_cap < 1:
        raise OrderIdealError("M cap and degree cap must be at least 1")

    unit = ideal.order_unit
    probes = []
    for M in escalation(M_cap):
        bound = unit.scale(M)
        upper = certify_membership(bound - r, ideal.cone, degree_cap, caps)
        probes.append((M, "upper", upper.kind))
        if not isinstance(upper, Member):
            continue
        lower = certify_membership(bound + r, ideal.cone, degree_cap, caps)
        probes.append((M, "lower", lower.kind))
        if isinstance(lower, Member):
            logger.info("%s in order ideal with M = %d", r, M)
            return IdealMember(M, upper.certificate, lower.certificate)
    return IdealNotFound(M_cap, degree_cap, tuple(probes))


# ---------------------------------------------------------------------------
# Face ideals and linear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceIdeal:
    face: Face
    indices: Tuple[int, ...]
    forms: Tuple[LinearForm, ...]
    order_unit: SparsePoly

    def as_order_ideal(self, cone: GeneratedCone) -> OrderIdealGen:
        """Generators are facet forms, so each certificate is the single generator."""
        certificates = []
        for form in self.forms:
            poly = form.as_poly()
            try:
                i = cone.generators.index(poly)
            except ValueError:
                raise OrderIdealError(f"{form} is not a generator of the cone") from None
            exps = tuple(int(k == i) for k in range(cone.num_generators))
            certificates.append(Certificate(((exps, Fraction(1)),)))
        return OrderIdealGen(tuple(f.as_poly() for f in self.forms), tuple(certificates), cone)


def _require_proper(K: Polytope, G: Face):
    if G.is_empty:
        raise OrderIdealError("the face is empty")
    if len(G.vertex_indices) == len(K.vertices):
        raise OrderIdealError("the face is all of K, not a proper face")


def face_ideal_generators(K: Polytope, G: Face) -> FaceIdeal:
    _require_proper(K, G)
    indices = tuple(sorted(facets_containing(K, G)))
    forms = tuple(K.facet_forms[i] for i in indices)
    total = forms[0]
    for form in forms[1:]:
        total = total + form
    for j, v in enumerate(K.vertices):
        if (total.evaluate(v) == 0) != (j in G.vertex_indices):
            raise OrderIdealError(f"internal error: {total} does not cut out the face at vertex {j}")
    return FaceIdeal(G, indices, forms, total.as_poly())


def combination_problem(K: Polytope, form: LinearForm) -> LPProblem:
    """form = c₀ + Σ c_i β_i over c₀, c_i ≥ 0, one row per coefficient of the form."""
    m = K.num_facets
    A = [[Fraction(1)] + [f.constant for f in K.facet_forms]]
    A += [[Fraction(0)] + [f.coeffs[j] for f in K.facet_forms] for j in range(K.dimension)]
    b = [form.constant] + list(form.coeffs)
    return LPProblem.build(A, b, num_vars=m + 1)


def linear_combination(K: Polytope, form: LinearForm) -> Union[Dict[int, Fraction], Vector]:
    """Nonnegative c₀ and c_i with form = c₀ + Σ c_i β_i (key -1 is c₀), or a Farkas vector."""
    m = K.num_facets
    outcome = lp_solve(combination_problem(K, form))
    if not outcome.feasible:
        return outcome.farkas
    x = outcome.solution
    combo = {-1: x[0]} if x[0] else {}
    combo.update({i: x[i + 1] for i in range(m) if x[i + 1]})
    return combo


def is_linear_positive(K: Polytope, form: LinearForm) -> bool:
    return isinstance(linear_combination(K, form), dict)


def _cuts_out(K: Polytope, G: Face, form: LinearForm) -> bool:
    return all((form.evaluate(v) == 0) == (j in G.vertex_indices) for j, v in enumerate(K.vertices))


@dataclass(frozen=True)
class Domination:
    M: int
    combination: Dict[int, Fraction]
    farkas_below: Optional[Vector]


def dominate_linear(K: Polytope, G: Face, beta: LinearForm, gamma: LinearForm) -> Domination:
    """Least positive integer M with M·β − γ a nonnegative combination of 1 and the facet forms."""
    _require_proper(K, G)
    if not is_linear_positive(K, beta):
        raise PreconditionError("β is not a nonnegative combination of 1 and the facet forms")
    if not is_linear_positive(K, gamma):
        raise PreconditionError("γ is not a nonnegative combination of 1 and the facet forms")
    if not _cuts_out(K, G, beta):
        raise PreconditionError("the zero set of β in K is not the face G")
    if any(gamma.evaluate(v) != 0 for v in G.vertices):
        raise PreconditionError("γ does not vanish on G")

    # Variables M, c₀, c_1..c_m ≥ 0; minimize M subject to M·β − c₀ − Σ c_i β_i = γ.
    m = K.num_facets
    A = [[beta.constant, Fraction(-1)] + [-f.constant for f in K.facet_forms]]
    for j in range(K.dimension):
        A.append([beta.coeffs[j], Fraction(0)] + [-f.coeffs[j] for f in K.facet_forms])
    b = [gamma.constant] + list(gamma.coeffs)
    outcome = lp_solve(LPProblem.build(A, b, objective=[1] + [0] * (m + 1)))
    if not outcome.feasible:
        raise OrderIdealError(f"no multiple of {beta} dominates {gamma}")
    M = max(1, ceil(outcome.objective_value))

    combination = linear_combination(K, beta.scale(M) - gamma)
    if not isinstance(combination, dict):
        raise OrderIdealError(f"internal error: {M}·β − γ is not a nonnegative combination")
    farkas_below = None
    if M > 1:
        farkas_below = linear_combination(K, beta.scale(M - 1) - gamma)
        if isinstance(farkas_below, dict):
            raise OrderIdealError(f"internal error: M = {M - 1} already dominates")
    logger.info("dominate: M = %d for %s over %s", M, beta, gamma)
    return Domination(M, combination, farkas_below)


def facet_decompose(K: Polytope, G: Face, beta: LinearForm) -> Dict[int, Fraction]:
    """Strictly positive a_i with β = Σ a_i β_i over the facets containing G."""
    _require_proper(K, G)
    if not is_linear_positive(K, beta):
        raise PreconditionError("β is not a nonnegative combination of 1 and the facet forms")
    if not _cuts_out(K, G, beta):
        raise PreconditionError("the zero set of β in K is not the face G")
    indices = sorted(facets_containing(K, G))
    forms = [K.facet_forms[i] for i in indices]
    A = [[f.constant for f in forms]] + [[f.coeffs[j] for f in forms] for j in range(K.dimension)]
    b = [beta.constant] + list(beta.coeffs)
    a = interior_solution(A, b)
    if a is None:
        raise OrderIdealError(f"{beta} has no strictly positive decomposition over facets {indices}")
    recomposed = LinearForm(Fraction(0), (Fraction(0),) * K.dimension)
    for coeff, form in zip(a, forms):
        recomposed = recomposed + form.scale(coeff)
    if recomposed != LinearForm.of(beta.constant, beta.coeffs):
        raise OrderIdealError("internal error: decomposition does not recompose")
    return dict(zip(indices, a))


def relative_order_unit_bound(K: Polytope, G: Face, beta: LinearForm) -> int:
    """M with M·β − Σ_{G⊆F_i} β_i positive: β is an order unit of I(G)."""
    ideal = face_ideal_generators(K, G)
    return dominate_linear(K, G, beta, LinearForm.from_poly(ideal.order_unit)).M


# ---------------------------------------------------------------------------
# Zero sets of monomial ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroSet:
    faces: Tuple[Face, ...]
    flats: Tuple[AffineFlat, ...]

    @property
    def meets_polytope(self) -> bool:
        return bool(self.faces)


def zero_faces(K: Polytope, monomial_generators: Sequence[Sequence[int]]) -> ZeroSet:
    """Z∩K as maximal faces and Z as maximal flats, for generators β^w."""
    supports = []
    for w in monomial_generators:
        if len(w) != K.num_facets:
            raise OrderIdealError(f"exponent vector {tuple(w)} does not match {K.num_facets} facets")
        supports.append([i for i, e in enumerate(w) if e > 0])
    if not supports:
        whole = face_of(K, [])
        return ZeroSet((whole,), (whole.flat,))
    if any(not s for s in supports):
        return ZeroSet((), ())

    faces: List[Face] = []
    flats: List[AffineFlat] = []
    for choice in choices_of(*supports):
        chosen = sorted(set(choice))
        face = face_of(K, chosen)
        if not face.is_empty:
            faces.append(face)
        if not face.flat.is_empty:
            flats.append(face.flat)

    maximal_faces = []
    for face in sorted(faces, key=lambda f: (-len(f.vertex_indices), sorted(f.vertex_indices))):
        if not any(face.vertex_indices <= kept.vertex_indices for kept in maximal_faces):
            maximal_faces.append(face)
    maximal_flats = []
    for flat in sorted(flats, key=lambda f: -f.dimension):
        if not any(kept.contains(flat) for kept in maximal_flats):
            maximal_flats.append(flat)
    return ZeroSet(tuple(maximal_faces), tuple(maximal_flats))


def is_zariski_dense(zero_set: ZeroSet) -> bool:
    """Every component of Z is the affine hull of a face of Z∩K."""
    return all(any(face.hull.same_as(flat) for face in zero_set.faces) for flat in zero_set.flats)


# ---------------------------------------------------------------------------
# Positivity from an order unit multiple
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageRecord:
    stage: str
    outcome: str
    detail: str = ""


@dataclass(frozen=True)
class Positive:
    certificate: Certificate
    trace: Tuple[StageRecord, ...]


@dataclass(frozen=True)
class Inconclusive:
    stage: str
    trace: Tuple[StageRecord, ...]


def lemma2_positivity(
    u: SparsePoly, a: SparsePoly, cone: GeneratedCone, caps: Optional[SearchCaps] = None
) -> Union[Positive, Inconclusive]:
    """If u is an order unit, u·a ≥ 0 and a ∈ ⟨u·a⟩, then a ≥ 0; search for its certificate."""
    caps = caps or SearchCaps.from_config()
    trace: List[StageRecord] = []

    unit = is_order_unit(u, cone, caps)
    if not isinstance(unit, OrderUnitYes):
        raise NotOrderUnitError(u, unit)
    trace.append(StageRecord("order-unit", "yes", f"margin {unit.margin}"))
    if a.is_zero():
        return Positive(Certificate(), tuple(trace))

    ua = u * a
    product = certify_membership(ua, cone, caps=caps)
    trace.append(StageRecord("product", product.kind))
    if not isinstance(product, Member):
        return Inconclusive("product", tuple(trace))

    ideal = OrderIdealGen((ua,), (product.certificate,), cone)
    membership = in_order_ideal(a, ideal, caps=caps)
    trace.append(StageRecord("ideal", membership.kind, f"M = {membership.M}" if isinstance(membership, IdealMember) else ""))
    if not isinstance(membership, IdealMember):
        return Inconclusive("ideal", tuple(trace))

    verdict = certify_membership(a, cone, caps=caps)
    trace.append(StageRecord("certificate", verdict.kind))
    if isinstance(verdict, Member):
        return Positive(verdict.certificate, tuple(trace))
    return Inconclusive("certificate", tuple(trace))
