"""
Recognize polytopes that are affine images of products of simplices.

The facets must split into classes C_1..C_k, each class having strictly
positive coefficients with Σ a_j β_j ≡ 1, and the classes' linear parts must
span independent subspaces of total dimension n. Class sizes then satisfy
Σ(|C_i| − 1) = n, which fixes k = m − n before any search starts.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Tuple, Union

from exact_linalg import Vector, interior_solution, rank, rref
from polytope_geom import Polytope
from utils import get_logger

logger = get_logger("structure")


@dataclass(frozen=True)
class SimplexProductWitness:
    classes: Tuple[Tuple[int, ...], ...]
    coeffs: Tuple[Tuple[Fraction, ...], ...]
    spans: Tuple[Tuple[Vector, ...], ...]

    @property
    def simplex_dimensions(self) -> Tuple[int, ...]:
        return tuple(len(c) - 1 for c in self.classes)


@dataclass(frozen=True)
class NotProduct:
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class SimpleVertexReport:
    simple: bool
    offending: Tuple[Tuple[int, int], ...]

    def __bool__(self):
        return self.simple


def simple_vertex_check(K: Polytope) -> SimpleVertexReport:
    """Every vertex on exactly n facets; offending entries are (vertex index, facet count)."""
    offending = []
    for j in range(len(K.vertices)):
        count = len(K.vertex_facets(j))
        if count != K.dimension:
            offending.append((j, count))
    return SimpleVertexReport(not offending, tuple(offending))


def _unit_combination(K: Polytope, cls: Tuple[int, ...]):
    forms = [K.facet_forms[i] for i in cls]
    A = [[f.constant for f in forms]] + [[f.coeffs[j] for f in forms] for j in range(K.dimension)]
    b = [1] + [0] * K.dimension
    return interior_solution(A, b)


def _partitions(remaining: Tuple[int, ...], k: int, valid: Dict[Tuple[int, ...], Tuple]) -> Iterator[List[Tuple[int, ...]]]:
    """Partitions of ``remaining`` into k valid classes, lexicographically."""
    if k == 0:
        if not remaining:
            yield []
        return
    if not remaining:
        return
    first = remaining[0]
    for cls in sorted(valid):
        if cls[0] != first or not set(cls) <= set(remaining):
            continue
        rest = tuple(i for i in remaining if i not in cls)
        for tail in _partitions(rest, k - 1, valid):
            yield [cls] + tail


def _span(K: Polytope, cls: Tuple[int, ...]) -> Tuple[Vector, ...]:
    R, pivots = rref([K.facet_forms[i].coeffs for i in cls])
    return tuple(tuple(R[i]) for i in range(len(pivots)))


def recognize_simplex_product(K: Polytope) -> Union[SimplexProductWitness, NotProduct]:
    n, m = K.dimension, K.num_facets
    k = m - n
    if m < n + 1 or m > 2 * n:
        return NotProduct("facet count", f"{m} facets in dimension {n}; a product of simplices has between {n + 1} and {2 * n}")

    largest = m - 2 * (k - 1)
    valid = {}
    for size in range(2, largest + 1):
        for cls in combinations(range(m), size):
            a = _unit_combination(K, cls)
            if a is not None:
                valid[cls] = a
    logger.debug("%d facet classes combine positively to 1", len(valid))

    found_partition = False
    for partition in _partitions(tuple(range(m)), k, valid):
        found_partition = True
        spans = [_span(K, cls) for cls in partition]
        if any(len(span) != len(cls) - 1 for span, cls in zip(spans, partition)):
            continue
        if rank([v for span in spans for v in span]) != n:
            continue
        expected_vertices = 1
        for cls in partition:
            expected_vertices *= len(cls)
        if expected_vertices != len(K.vertices):
            return NotProduct("vertex count", f"classes predict {expected_vertices} vertices, K has {len(K.vertices)}")
        return SimplexProductWitness(tuple(partition), tuple(tuple(valid[c]) for c in partition), tuple(spans))

    if not found_partition:
        return NotProduct("no positive solution", "no partition of the facets into classes combining positively to 1")
    return NotProduct("span failure", "class linear spans are dependent")
