"""
Compact convex polytopes with interior, kept in dual form: sorted vertices,
normalized irredundant facet forms, and the vertex/facet incidence.

Desk-scale brute force throughout (n ≤ 4, a dozen facets): vertex enumeration
tries every n-subset of halfspaces, facet discovery every n-subset of points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from exact_linalg import (
    FREE,
    NONNEG,
    LPProblem,
    Vector,
    dot,
    linear_solve,
    lp_solve,
    nullspace,
    primitive,
    rank,
    rref,
    to_rational,
    vector,
)
from multipoly import PolynomialError, SparsePoly, default_variables
from utils import get_logger

logger = get_logger("polytope")


class PolytopeError(ValueError):
    """Base error for polytope construction and face queries"""


class NotFullDimensionalError(PolytopeError):
    def __init__(self, dependency: "LinearForm"):
        super().__init__(f"points are not full-dimensional: all satisfy {dependency.format()} = 0")
        self.dependency = dependency


class UnboundedRegionError(PolytopeError):
    def __init__(self, ray: Vector):
        super().__init__(f"region is unbounded along the ray {tuple(str(v) for v in ray)}")
        self.ray = ray


class EmptyInteriorError(PolytopeError):
    def __init__(self, certificate: Vector):
        super().__init__(
            "region has empty interior: nonnegative multipliers "
            f"{tuple(str(v) for v in certificate)} kill every linear part with nonpositive constant"
        )
        self.certificate = certificate


class NotAFaceError(PolytopeError):
    """The face argument is empty, improper, or does not belong to the polytope"""


@dataclass(frozen=True)
class LinearForm:
    """The affine function constant + Σ coeffs[j]·x_j."""
    constant: Fraction
    coeffs: Tuple[Fraction, ...]

    @classmethod
    def of(cls, constant, coeffs: Sequence) -> "LinearForm":
        return cls(to_rational(constant), vector(coeffs))

    @classmethod
    def from_poly(cls, p: SparsePoly) -> "LinearForm":
        if p.degree > 1:
            raise PolynomialError(f"{p} is not affine-linear")
        return cls(p.constant_term, p.linear_part())

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def evaluate(self, point: Sequence) -> Fraction:
        return self.constant + dot(self.coeffs, vector(point))

    __call__ = evaluate

    def normalized(self) -> "LinearForm":
        """Coprime integer coefficients, same sign."""
        values = primitive((self.constant,) + self.coeffs)
        return LinearForm(values[0], values[1:])

    def as_poly(self) -> SparsePoly:
        return SparsePoly.affine(self.constant, self.coeffs)

    def is_zero(self) -> bool:
        return self.constant == 0 and not any(self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.constant + other.constant, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + other.scale(-1)

    def scale(self, factor) -> "LinearForm":
        factor = to_rational(factor)
        return LinearForm(self.constant * factor, tuple(c * factor for c in self.coeffs))

    def format(self, variables: Optional[Sequence[str]] = None) -> str:
        return self.as_poly().format(variables)

    def __str__(self):
        return self.format()


def _form_order(form: LinearForm):
    first = next((i for i, c in enumerate(form.coeffs) if c), len(form.coeffs))
    return (form.constant, first, form.coeffs)


@dataclass(frozen=True)
class AffineFlat:
    """point + span(directions); point None means the empty flat."""
    point: Optional[Vector]
    directions: Tuple[Vector, ...]

    @classmethod
    def empty(cls) -> "AffineFlat":
        return cls(None, ())

    @classmethod
    def spanned_by(cls, points: Sequence[Vector]) -> "AffineFlat":
        if not points:
            return cls.empty()
        base = points[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
        if not diffs:
            return cls(base, ())
        R, pivots = rref(diffs)
        return cls(base, tuple(tuple(R[i]) for i in range(len(pivots))))

    @classmethod
    def solve(cls, forms: Sequence[LinearForm], nvars: int) -> "AffineFlat":
        """Common zero set of the given affine forms."""
        if not forms:
            identity = tuple(tuple(Fraction(int(i == j)) for j in range(nvars)) for i in range(nvars))
            return cls(tuple(Fraction(0) for _ in range(nvars)), identity)
        solution = linear_solve([f.coeffs for f in forms], [-f.constant for f in forms], ncols=nvars)
        if not solution.consistent:
            return cls.empty()
        return cls(solution.particular, solution.nullspace)

    @property
    def is_empty(self) -> bool:
        return self.point is None

    @property
    def dimension(self) -> int:
        return -1 if self.point is None else len(self.directions)

    def contains_point(self, p: Sequence) -> bool:
        if self.point is None:
            return False
        offset = tuple(a - b for a, b in zip(vector(p), self.point))
        if not any(offset):
            return True
        return rank(list(self.directions) + [offset]) == len(self.directions)

    def contains(self, other: "AffineFlat") -> bool:
        if other.point is None:
            return True
        if not self.contains_point(other.point):
            return False
        return rank(list(self.directions) + list(other.directions)) == len(self.directions)

    def same_as(self, other: "AffineFlat") -> bool:
        return self.contains(other) and other.contains(self)

    def describe(self) -> str:
        if self.point is None:
            return "empty"
        point = "(" + ", ".join(str(v) for v in self.point) + ")"
        if not self.directions:
            return f"point {point}"
        dirs = ", ".join("(" + ", ".join(str(v) for v in d) + ")" for d in self.directions)
        return f"{point} + span{{{dirs}}}"


@dataclass(frozen=True)
class Face:
    facets: FrozenSet[int]
    vertex_indices: FrozenSet[int]
    vertices: Tuple[Vector, ...]
    dimension: int
    hull: AffineFlat
    interior_point: Optional[Vector]
    flat: AffineFlat

    @property
    def is_empty(self) -> bool:
        return not self.vertex_indices


@dataclass(frozen=True)
class Polytope:
    dimension: int
    vertices: Tuple[Vector, ...]
    facet_forms: Tuple[LinearForm, ...]
    incidence: Tuple[FrozenSet[int], ...]

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> "Polytope":
        return from_vertices(points)

    @classmethod
    def from_halfspaces(cls, forms: Iterable[LinearForm]) -> "Polytope":
        return from_halfspaces(forms)

    @property
    def num_facets(self) -> int:
        return len(self.facet_forms)

    def facet_polys(self) -> Tuple[SparsePoly, ...]:
        return tuple(f.as_poly() for f in self.facet_forms)

    def vertex_facets(self, j: int) -> FrozenSet[int]:
        return frozenset(i for i, verts in enumerate(self.incidence) if j in verts)

    def index_of(self, form: LinearForm) -> int:
        target = LinearForm.of(form.constant, form.coeffs).normalized()
        for i, f in enumerate(self.facet_forms):
            if f == target:
                return i
        raise NotAFaceError(f"{form.format()} is not a facet form of this polytope")

    def vertex_index(self, point: Sequence) -> int:
        target = vector(point)
        try:
            return self.vertices.index(target)
        except ValueError:
            raise NotAFaceError(f"{tuple(str(v) for v in target)} is not a vertex") from None

    def contains(self, point: Sequence) -> bool:
        return all(f.evaluate(point) >= 0 for f in self.facet_forms)

    def vertex_face(self, point: Sequence) -> Face:
        return face_of(self, self.vertex_facets(self.vertex_index(point)))

    def face_containing(self, points: Sequence[Sequence]) -> Face:
        """Smallest face containing the given vertices."""
        indices = {self.vertex_index(p) for p in points}
        return face_of(self, [i for i, verts in enumerate(self.incidence) if indices <= verts])

    def faces(self, include_polytope: bool = False) -> List[Face]:
        """All nonempty faces, largest first."""
        everything = frozenset(range(len(self.vertices)))
        seen = {everything}
        frontier = [everything]
        while frontier:
            current = frontier.pop()
            for verts in self.incidence:
                smaller = current & verts
                if smaller and smaller not in seen:
                    seen.add(smaller)
                    frontier.append(smaller)
        if not include_polytope:
            seen.discard(everything)
        faces = [
            face_of(self, [i for i, verts in enumerate(self.incidence) if vertex_set <= verts])
            for vertex_set in seen
        ]
        return sorted(faces, key=lambda f: (-f.dimension, sorted(f.vertex_indices)))

    def describe(self) -> str:
        names = default_variables(self.dimension)
        forms = ", ".join(f.format(names) for f in self.facet_forms)
        return f"{len(self.vertices)} vertices, {self.num_facets} facets: {forms}"


def _normal_through(points: Sequence[Vector], n: int) -> Optional[LinearForm]:
    base = points[0]
    rows = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    if rows and rank(rows) < n - 1:
        return None
    normals = nullspace(rows, ncols=n)
    if len(normals) != 1:
        return None
    c = normals[0]
    return LinearForm(-dot(c, base), c)


def from_vertices(points: Iterable[Sequence]) -> Polytope:
    pts = sorted({vector(p) for p in points})
    if not pts:
        raise PolytopeError("no points given")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise PolytopeError("points have different dimensions")

    lifted = [list(p) + [Fraction(1)] for p in pts]
    dependencies = nullspace(lifted, ncols=n + 1)
    if dependencies:
        d = dependencies[0]
        raise NotFullDimensionalError(LinearForm(d[n], d[:n]).normalized())

    forms = set()
    for subset in combinations(pts, n):
        form = _normal_through(list(subset), n)
        if form is None:
            continue
        values = [form.evaluate(p) for p in pts]
        if all(v >= 0 for v in values):
            forms.add(form.normalized())
        elif all(v <= 0 for v in values):
            forms.add(form.scale(-1).normalized())
    facet_forms = tuple(sorted(forms, key=_form_order))

    def extreme(p):
        tight = [f.coeffs for f in facet_forms if f.evaluate(p) == 0]
        return bool(tight) and rank(tight) == n

    vertices = tuple(p for p in pts if extreme(p))
    incidence = tuple(
        frozenset(j for j, v in enumerate(vertices) if f.evaluate(v) == 0) for f in facet_forms
    )
    logger.debug("polytope with %d vertices and %d facets", len(vertices), len(facet_forms))
    return Polytope(n, vertices, facet_forms, incidence)


def _recession_ray(forms: Sequence[LinearForm], n: int) -> Optional[Vector]:
    m = len(forms)
    # Variables: d (n, free), t, s (m), u (n), l (n); maximize t inside the box |d_j| ≤ 1.
    num = n + 1 + m + 2 * n
    A, b = [], []
    for i, f in enumerate(forms):
        row = [Fraction(0)] * num
        row[:n] = f.coeffs
        row[n] = Fraction(-1)
        row[n + 1 + i] = Fraction(-1)
        A.append(row)
        b.append(0)
    for j in range(n):
        upper = [Fraction(0)] * num
        upper[j] = Fraction(1)
        upper[n + 1 + m + j] = Fraction(1)
        A.append(upper)
        b.append(1)
        lower = [Fraction(0)] * num
        lower[j] = Fraction(1)
        lower[n + 1 + m + n + j] = Fraction(-1)
        A.append(lower)
        b.append(-1)
    signs = [FREE] * n + [NONNEG] * (num - n)
    objective = [0] * num
    objective[n] = -1
    outcome = lp_solve(LPProblem.build(A, b, signs=signs, objective=objective))
    if outcome.feasible and outcome.solution[n] > 0:
        return primitive(outcome.solution[:n])

    for j in range(n):
        for sign in (1, -1):
            A = []
            for i, f in enumerate(forms):
                row = list(f.coeffs) + [Fraction(0)] * m
                row[n + i] = Fraction(-1)
                A.append(row)
            pin = [Fraction(0)] * (n + m)
            pin[j] = Fraction(sign)
            A.append(pin)
            outcome = lp_solve(LPProblem.build(A, [0] * m + [1], signs=[FREE] * n + [NONNEG] * m))
            if outcome.feasible:
                return primitive(outcome.solution[:n])
    return None


def _empty_interior_certificate(forms: Sequence[LinearForm], n: int) -> Optional[Vector]:
    m = len(forms)
    # y ≥ 0 (m), w ≥ 0: Σ y_i a_i = 0, Σ y_i = 1, Σ y_i a0_i + w = 0
    A = [[f.coeffs[j] for f in forms] + [Fraction(0)] for j in range(n)]
    A.append([Fraction(1)] * m + [Fraction(0)])
    A.append([f.constant for f in forms] + [Fraction(1)])
    outcome = lp_solve(LPProblem.build(A, [0] * n + [1, 0]))
    if outcome.feasible:
        return outcome.solution[:m]
    return None


def from_halfspaces(forms: Iterable[LinearForm]) -> Polytope:
    forms = [LinearForm.of(f.constant, f.coeffs) for f in forms]
    if not forms:
        raise PolytopeError("no halfspaces given")
    n = forms[0].nvars
    if any(f.nvars != n for f in forms):
        raise PolytopeError("halfspaces have different dimensions")

    certificate = _empty_interior_certificate(forms, n)
    if certificate is not None:
        raise EmptyInteriorError(certificate)
    ray = _recession_ray(forms, n)
    if ray is not None:
        raise UnboundedRegionError(ray)

    points = set()
    for subset in combinations(forms, n):
        solution = linear_solve([f.coeffs for f in subset], [-f.constant for f in subset], ncols=n)
        if solution.unique and all(f.evaluate(solution.particular) >= 0 for f in forms):
            points.add(solution.particular)
    return from_vertices(points)


def face_of(K: Polytope, facet_subset: Iterable[int]) -> Face:
    """The face ∩_{i∈S} F_i; an empty face still reports the flat where the hyperplanes meet."""
    S = frozenset(facet_subset)
    if any(i < 0 or i >= K.num_facets for i in S):
        raise NotAFaceError(f"facet indices {sorted(S)} out of range")
    vertex_set = frozenset(range(len(K.vertices)))
    for i in S:
        vertex_set &= K.incidence[i]
    flat = AffineFlat.solve([K.facet_forms[i] for i in sorted(S)], K.dimension)
    if not vertex_set:
        return Face(S, vertex_set, (), -1, AffineFlat.empty(), None, flat)
    verts = tuple(K.vertices[j] for j in sorted(vertex_set))
    hull = AffineFlat.spanned_by(list(verts))
    centre = tuple(sum(column, Fraction(0)) / len(verts) for column in zip(*verts))
    return Face(S, vertex_set, verts, hull.dimension, hull, centre, flat)


def facets_containing(K: Polytope, G: Face) -> FrozenSet[int]:
    if G.is_empty:
        raise NotAFaceError("the empty face lies in every facet")
    return frozenset(i for i, verts in enumerate(K.incidence) if G.vertex_indices <= verts)
