"""
Finitely generated positive cones and their membership certificates.

A cone is everything reachable from the generators by products, positive
rational scalars and sums; the empty product is the constant 1. Membership is
searched by degree escalation: at degree d the target is matched coefficient by
coefficient against all generator products of total degree at most d, which is
one exact LP. Refutation rules (a negative value at an admissible point, zero
propagation across an attached point pair) turn a failed search into a
definitive answer where they apply.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, floor
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from config import (
    ENABLE_PRODUCT_CACHE,
    ENABLE_VERDICT_LEDGER,
    PRODUCT_CACHE_SIZE,
    SEARCH_CONFIG,
    VERDICT_LEDGER_SIZE,
)
from exact_linalg import LPProblem, UnboundedObjectiveError, Vector, lp_solve, to_rational, vector
from multipoly import Exponent, SparsePoly, default_variables
from polytope_geom import Polytope
from utils import get_logger

logger = get_logger("cone")


class ConeError(ValueError):
    """Malformed cone, certificate, or search request"""


class PreconditionError(ConeError):
    """A documented precondition failed; ``generator`` names the offender when there is one"""

    def __init__(self, message: str, generator: Optional[int] = None):
        super().__init__(message)
        self.generator = generator


@dataclass(frozen=True)
class SearchCaps:
    max_degree: int = 8
    max_m: int = 64
    grid_denominator_cap: int = 64
    grid_point_budget: int = 20000

    @classmethod
    def from_config(cls, **overrides) -> "SearchCaps":
        values = dict(SEARCH_CONFIG)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ConeError(f"degree cap must be nonnegative, got {self.max_degree}")
        if self.max_m < 1 or self.grid_denominator_cap < 1 or self.grid_point_budget < 0:
            raise ConeError("M cap and grid denominator cap must be at least 1")

    def with_degree(self, max_degree: int) -> "SearchCaps":
        return replace(self, max_degree=max_degree)


def _label(g: SparsePoly, names: Sequence[str]) -> str:
    text = g.format(names)
    return text if text in names else f"({text})"


@dataclass(frozen=True)
class GeneratedCone:
    generators: Tuple[SparsePoly, ...]
    nvars: int
    polytope: Optional[Polytope] = None
    points: Tuple[Vector, ...] = ()
    point_pairs: Tuple[Tuple[Vector, Vector], ...] = ()
    sample_box: Tuple[Fraction, Fraction] = (Fraction(-2), Fraction(2))
    labels: Tuple[str, ...] = ()
    variables: Tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        if any(g.is_zero() for g in self.generators):
            raise ConeError("cone generators must be nonzero")
        if any(g.nvars != self.nvars for g in self.generators):
            raise ConeError(f"every generator must use {self.nvars} variables")
        if not self.variables:
            object.__setattr__(self, "variables", default_variables(self.nvars))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(_label(g, self.variables) for g in self.generators))
        if len(self.labels) != len(self.generators):
            raise ConeError("one label per generator is required")
        for p in self.points:
            bad = self.negative_generator(p)
            if bad is not None:
                raise PreconditionError(
                    f"attached point {tuple(str(v) for v in p)} is not admissible: {self.labels[bad]} < 0", bad
                )
        for p, q in self.point_pairs:
            check_propagation_pair(self, p, q)

    @classmethod
    def of(cls, generators: Iterable[SparsePoly], nvars: Optional[int] = None, **kwargs) -> "GeneratedCone":
        generators = tuple(generators)
        if nvars is None:
            if not generators:
                raise ConeError("variable count needed for a cone without generators")
            nvars = generators[0].nvars
        points = tuple(vector(p) for p in kwargs.pop("points", ()))
        pairs = tuple((vector(p), vector(q)) for p, q in kwargs.pop("point_pairs", ()))
        box = kwargs.pop("sample_box", None)
        if box is not None:
            kwargs["sample_box"] = (to_rational(box[0]), to_rational(box[1]))
        return cls(generators, nvars, points=points, point_pairs=pairs, **kwargs)

    @classmethod
    def from_polytope(cls, K: Polytope, name: str = "") -> "GeneratedCone":
        """The cone R[K]⁺ generated by the facet forms of K."""
        return cls(K.facet_polys(), K.dimension, polytope=K, name=name)

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def negative_generator(self, point: Sequence) -> Optional[int]:
        for i, g in enumerate(self.generators):
            if g.evaluate(point) < 0:
                return i
        return None

    def is_admissible(self, point: Sequence) -> bool:
        return self.negative_generator(point) is None

    def candidate_points(self) -> List[Vector]:
        """Attached points, then polytope vertices, then midpoints of vertex pairs."""
        out: List[Vector] = list(self.points)
        for p, _ in self.point_pairs:
            if p not in out:
                out.append(p)
        if self.polytope is not None:
            vertices = self.polytope.vertices
            out.extend(v for v in vertices if v not in out)
            for a, b in combinations(vertices, 2):
                mid = tuple((s + t) / 2 for s, t in zip(a, b))
                if mid not in out:
                    out.append(mid)
        return out

    def bounding_box(self) -> List[Tuple[Fraction, Fraction]]:
        if self.polytope is not None:
            columns = list(zip(*self.polytope.vertices))
            return [(min(c), max(c)) for c in columns]
        return [self.sample_box] * self.nvars


@dataclass(frozen=True)
class Certificate:
    """Σ coeff · Π g_i^{exps[i]} with every coeff > 0; the empty product is 1."""
    terms: Tuple[Tuple[Exponent, Fraction], ...] = ()

    def __post_init__(self):
        for exps, coeff in self.terms:
            if coeff <= 0:
                raise ConeError(f"certificate coefficient {coeff} on {exps} is not positive")

    @classmethod
    def from_mapping(cls, mapping) -> "Certificate":
        items = [(tuple(int(e) for e in exps), to_rational(c)) for exps, c in dict(mapping).items()]
        return cls(tuple(sorted(items, key=lambda item: _product_order(item[0]))))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps, _ in self.terms), default=0)

    def as_dict(self) -> Dict[Exponent, Fraction]:
        return dict(self.terms)

    def expand(self, cone: GeneratedCone) -> SparsePoly:
        total = SparsePoly.zero(cone.nvars)
        for exps, coeff in self.terms:
            total = total + product(cone, exps).scale(coeff)
        return total

    def format(self, cone: GeneratedCone) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.terms:
            factors = [
                label if e == 1 else f"{label}^{e}" for label, e in zip(cone.labels, exps) if e
            ]
            if not factors:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append("*".join(factors))
            else:
                pieces.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(pieces)


@dataclass(frozen=True)
class Member:
    certificate: Certificate
    degree: int

    kind = "member"


@dataclass(frozen=True)
class NotFoundUpTo:
    degree: int
    refutations: Tuple[Tuple[int, Tuple[Tuple[Exponent, Fraction], ...]], ...] = ()

    kind = "not-found"


@dataclass(frozen=True)
class Refuted:
    """``rule`` is negative-value (witness = (p,)) or zero-propagation (witness = (p, q))."""
    rule: str
    witness: Tuple[Vector, ...]
    values: Tuple[Fraction, ...]

    kind = "refuted"


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    kind = "inconclusive"


MembershipVerdict = Union[Member, NotFoundUpTo, Refuted]


@dataclass(frozen=True)
class OrderUnitYes:
    margin: Fraction
    certificate: Certificate
    degree: int

    verdict = "Yes"


@dataclass(frozen=True)
class OrderUnitNo:
    witness: Vector
    value: Fraction

    verdict = "No"


@dataclass(frozen=True)
class OrderUnitUnknown:
    caps: SearchCaps

    verdict = "Unknown"


OrderUnitVerdict = Union[OrderUnitYes, OrderUnitNo, OrderUnitUnknown]


# ---------------------------------------------------------------------------
# Generator products
# ---------------------------------------------------------------------------

def _product_order(exps: Exponent):
    return (sum(exps), tuple(-e for e in exps))


def _compositions(total: int, parts: int) -> Iterator[Exponent]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def exponent_vectors(m: int, degree: int) -> List[Exponent]:
    return [w for total in range(degree + 1) for w in _compositions(total, m)]


def _expand_product(generators: Tuple[SparsePoly, ...], nvars: int, exps: Exponent) -> SparsePoly:
    i = next((k for k, e in enumerate(exps) if e), None)
    if i is None:
        return SparsePoly.constant(nvars, 1)
    lower = list(exps)
    lower[i] -= 1
    return _generator_product(generators, nvars, tuple(lower)) * generators[i]


_cached_product = lru_cache(maxsize=PRODUCT_CACHE_SIZE)(_expand_product)


def _generator_product(generators: Tuple[SparsePoly, ...], nvars: int, exps: Exponent) -> SparsePoly:
    if ENABLE_PRODUCT_CACHE:
        return _cached_product(generators, nvars, exps)
    return _expand_product(generators, nvars, exps)


def product(cone: GeneratedCone, exps: Sequence[int]) -> SparsePoly:
    exps = tuple(exps)
    if len(exps) != cone.num_generators:
        raise ConeError(f"exponent vector {exps} does not match {cone.num_generators} generators")
    return _generator_product(cone.generators, cone.nvars, exps)


def product_cache_info():
    return _cached_product.cache_info()


def enumerate_products(cone: GeneratedCone, degree: int) -> List[Tuple[Exponent, SparsePoly]]:
    if degree < 0:
        raise ConeError(f"degree must be nonnegative, got {degree}")
    return [(w, product(cone, w)) for w in exponent_vectors(cone.num_generators, degree)]


def verify_certificate(f: SparsePoly, cert: Certificate, cone: GeneratedCone) -> bool:
    if any(len(exps) != cone.num_generators for exps, _ in cert.terms):
        return False
    if f.nvars != cone.nvars:
        return False
    return cert.expand(cone) == f


# ---------------------------------------------------------------------------
# Verdict ledger
# ---------------------------------------------------------------------------

LedgerKey = Tuple[SparsePoly, Tuple[SparsePoly, ...]]


class VerdictLedger:
    """Verdict kinds per (f, generators), least recently used entries evicted past ``maxsize``.

    Conflicts are kept apart from the entries so eviction never hides one.
    """

    def __init__(self, maxsize: int = VERDICT_LEDGER_SIZE):
        self.maxsize = maxsize
        self._kinds: "OrderedDict[LedgerKey, Set[str]]" = OrderedDict()
        self._conflicts: List[LedgerKey] = []

    def __len__(self) -> int:
        return len(self._kinds)

    def record(self, f: SparsePoly, cone: GeneratedCone, kind: str) -> None:
        key = (f, cone.generators)
        kinds = self._kinds.pop(key, set())
        kinds.add(kind)
        self._kinds[key] = kinds
        if {"member", "refuted"} <= kinds and key not in self._conflicts:
            logger.error("conflicting verdicts for %s", f)
            self._conflicts.append(key)
        while len(self._kinds) > self.maxsize:
            self._kinds.popitem(last=False)

    def kinds(self, f: SparsePoly, cone: GeneratedCone) -> Set[str]:
        return set(self._kinds.get((f, cone.generators), ()))

    def conflicts(self) -> List[LedgerKey]:
        return list(self._conflicts)


_verdict_ledger = VerdictLedger()


def record_verdict(f: SparsePoly, cone: GeneratedCone, verdict, ledger: Optional[VerdictLedger] = None) -> None:
    if ENABLE_VERDICT_LEDGER:
        (ledger or _verdict_ledger).record(f, cone, verdict.kind)


def verdict_conflicts() -> List[LedgerKey]:
    """(f, generators) pairs that were both certified and refuted."""
    return _verdict_ledger.conflicts()


# ---------------------------------------------------------------------------
# Sample points
# ---------------------------------------------------------------------------

def grid_points(cone: GeneratedCone, caps: SearchCaps) -> Iterator[Vector]:
    """Rational grid over the cone's bounding box, denominators 1, 2, 4, ... up to the cap."""
    box = cone.bounding_box()
    seen: Set[Vector] = set()
    emitted = 0
    denominator = 1
    while denominator <= caps.grid_denominator_cap:
        axes = [
            [Fraction(k, denominator) for k in range(ceil(lo * denominator), floor(hi * denominator) + 1)]
            for lo, hi in box
        ]
        for point in _cartesian(axes):
            if point in seen:
                continue
            if emitted >= caps.grid_point_budget:
                logger.debug("grid point budget of %d exhausted", caps.grid_point_budget)
                return
            seen.add(point)
            emitted += 1
            yield point
        denominator *= 2


def _cartesian(axes: List[List[Fraction]]) -> Iterator[Vector]:
    if not axes:
        yield ()
        return
    for head in axes[0]:
        for tail in _cartesian(axes[1:]):
            yield (head,) + tail


def admissible_points(cone: GeneratedCone, caps: SearchCaps, grid: bool = True) -> Iterator[Vector]:
    seen: Set[Vector] = set()
    sources = [cone.candidate_points()]
    if grid:
        sources.append(grid_points(cone, caps))
    for source in sources:
        for p in source:
            if p not in seen and cone.is_admissible(p):
                seen.add(p)
                yield p


# ---------------------------------------------------------------------------
# Refutation rules
# ---------------------------------------------------------------------------

def check_propagation_pair(cone: GeneratedCone, p: Sequence, q: Sequence) -> None:
    p, q = vector(p), vector(q)
    for point in (p, q):
        if len(point) != cone.nvars:
            raise PreconditionError(f"point {tuple(str(v) for v in point)} has the wrong dimension")
    for i, g in enumerate(cone.generators):
        value = g.evaluate(p)
        label = cone.labels[i] if cone.labels else str(g)
        if value < 0:
            raise PreconditionError(f"generator {label} is negative at p = {tuple(str(v) for v in p)}", i)
        if value == 0 and g.evaluate(q) != 0:
            raise PreconditionError(f"generator {label} vanishes at p but not at q = {tuple(str(v) for v in q)}", i)


def zero_propagation_refute(f: SparsePoly, cone: GeneratedCone, p: Sequence, q: Sequence) -> Union[Refuted, Inconclusive]:
    """Cone elements vanishing at p vanish at q whenever every generator vanishing at p does."""
    check_propagation_pair(cone, p, q)
    p, q = vector(p), vector(q)
    fp, fq = f.evaluate(p), f.evaluate(q)
    if fp == 0 and fq != 0:
        logger.info("zero propagation refutes %s at %s -> %s", f, p, q)
        return Refuted("zero-propagation", (p, q), (fp, fq))
    if fp != 0:
        return Inconclusive("f does not vanish at p")
    return Inconclusive("f vanishes at both points")


def recheck_refutation(f: SparsePoly, cone: GeneratedCone, verdict: Refuted) -> bool:
    """Re-evaluate a refutation witness exactly."""
    if verdict.rule == "negative-value":
        (p,) = verdict.witness
        return cone.is_admissible(p) and f.evaluate(p) < 0
    if verdict.rule == "zero-propagation":
        p, q = verdict.witness
        try:
            check_propagation_pair(cone, p, q)
        except PreconditionError:
            return False
        return f.evaluate(p) == 0 and f.evaluate(q) != 0
    return False


def _refute(f: SparsePoly, cone: GeneratedCone, points: Iterable[Vector]) -> Optional[Refuted]:
    for p in points:
        if not cone.is_admissible(p):
            continue
        value = f.evaluate(p)
        if value < 0:
            logger.info("negative value %s of %s at admissible point %s", value, f, p)
            return Refuted("negative-value", (p,), (value,))
    for p, q in cone.point_pairs:
        outcome = zero_propagation_refute(f, cone, p, q)
        if isinstance(outcome, Refuted):
            return outcome
    return None


# ---------------------------------------------------------------------------
# Certificate search
# ---------------------------------------------------------------------------

def _match_lp(f: SparsePoly, products: List[Tuple[Exponent, SparsePoly]], with_margin: bool):
    """Rows are monomials, columns the products (plus the margin column t)."""
    monomials = set(f.monomials())
    for _, p in products:
        monomials.update(p.monomials())
    monomials = sorted(monomials, key=lambda e: (sum(e), e))
    A = []
    for mono in monomials:
        row = [p.coefficient(mono) for _, p in products]
        if with_margin:
            row.append(Fraction(int(sum(mono) == 0)))
        A.append(row)
    b = [f.coefficient(mono) for mono in monomials]
    return monomials, A, b


def _certificate_from(products, solution) -> Certificate:
    return Certificate(tuple((w, c) for (w, _), c in zip(products, solution) if c > 0))


def _search_degree(f: SparsePoly, cone: GeneratedCone, degree: int):
    products = enumerate_products(cone, degree)
    monomials, A, b = _match_lp(f, products, with_margin=False)
    outcome = lp_solve(LPProblem.build(A, b, num_vars=len(products)))
    if outcome.feasible:
        return _certificate_from(products, outcome.solution)
    return tuple((mono, y) for mono, y in zip(monomials, outcome.farkas) if y)


def certify_membership(
    f: SparsePoly,
    cone: GeneratedCone,
    degree_cap: Optional[int] = None,
    caps: Optional[SearchCaps] = None,
    points: Sequence[Sequence] = (),
    refute: bool = True,
) -> MembershipVerdict:
    """Escalate the degree up to the cap; with ``refute`` off only the LPs run."""
    caps = caps or SearchCaps.from_config()
    degree_cap = caps.max_degree if degree_cap is None else degree_cap
    if degree_cap < 0:
        raise ConeError(f"degree cap must be nonnegative, got {degree_cap}")
    if f.nvars != cone.nvars:
        raise ConeError(f"polynomial has {f.nvars} variables, cone has {cone.nvars}")

    if f.is_zero():
        verdict = Member(Certificate(), 0)
        record_verdict(f, cone, verdict)
        return verdict

    verdict = None
    if refute:
        verdict = _refute(f, cone, [vector(p) for p in points] + cone.candidate_points())
    if verdict is None:
        refutations = []
        for d in range(degree_cap + 1):
            found = _search_degree(f, cone, d)
            if isinstance(found, Certificate):
                if not verify_certificate(f, found, cone):
                    raise ConeError("internal error: LP certificate does not expand to the target")
                logger.info("certified %s at degree %d", f, d)
                verdict = Member(found, d)
                break
            logger.debug("no certificate for %s at degree %d", f, d)
            refutations.append((d, found))
        else:
            if refute:
                verdict = _refute(f, cone, grid_points(cone, caps))
            verdict = verdict or NotFoundUpTo(degree_cap, tuple(refutations))
    record_verdict(f, cone, verdict)
    return verdict


def _max_margin(f: SparsePoly, cone: GeneratedCone, degree: int):
    products = enumerate_products(cone, degree)
    _, A, b = _match_lp(f, products, with_margin=True)
    objective = [0] * len(products) + [-1]
    try:
        outcome = lp_solve(LPProblem.build(A, b, objective=objective))
    except UnboundedObjectiveError:
        # Cone contains −1; every margin works, so certify f − 1.
        logger.warning("cone contains a negative constant; margin fixed at 1")
        A.append([Fraction(0)] * len(products) + [Fraction(1)])
        outcome = lp_solve(LPProblem.build(A, b + [1]))
    if not outcome.feasible:
        return None
    margin = outcome.solution[-1]
    if margin <= 0:
        return None
    return margin, _certificate_from(products, outcome.solution[:-1])


def is_order_unit(f: SparsePoly, cone: GeneratedCone, caps: Optional[SearchCaps] = None) -> OrderUnitVerdict:
    """Yes(c) when f − c certifies for some c > 0; No at an admissible point with f ≤ 0."""
    caps = caps or SearchCaps.from_config()
    if f.nvars != cone.nvars:
        raise ConeError(f"polynomial has {f.nvars} variables, cone has {cone.nvars}")

    for p in admissible_points(cone, caps, grid=False):
        value = f.evaluate(p)
        if value <= 0:
            return OrderUnitNo(p, value)

    for d in range(caps.max_degree + 1):
        found = _max_margin(f, cone, d)
        if found is not None:
            margin, cert = found
            if not verify_certificate(f - margin, cert, cone):
                raise ConeError("internal error: margin certificate does not expand")
            logger.info("%s is an order unit with margin %s at degree %d", f, margin, d)
            return OrderUnitYes(margin, cert, d)

    for p in admissible_points(cone, caps):
        value = f.evaluate(p)
        if value <= 0:
            return OrderUnitNo(p, value)
    return OrderUnitUnknown(caps)
