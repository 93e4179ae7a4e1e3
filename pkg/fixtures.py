"""
Named polytopes and cones shared by the gallery, the CLI and the tests.
"""

import random
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Dict, List, Sequence

from cone_cert import GeneratedCone
from exact_linalg import rank
from multipoly import SparsePoly
from polytope_geom import Polytope, from_vertices

DISK_POINT = (Fraction(0), Fraction(1, 5))
DISK_MIRROR = (Fraction(0), Fraction(-7, 5))


def interval() -> Polytope:
    return from_vertices([(0,), (1,)])


def triangle() -> Polytope:
    return from_vertices([(0, 0), (1, 0), (0, 1)])


def square() -> Polytope:
    return from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])


def cube() -> Polytope:
    return from_vertices(list(cartesian((0, 1), repeat=3)))


def trapezoid() -> Polytope:
    return from_vertices([(0, 0), (2, 0), (1, 1), (0, 1)])


def pyramid() -> Polytope:
    """Square base [−1,1]² at height 0, apex (0,0,1)."""
    return from_vertices([(-1, -1, 0), (1, -1, 0), (-1, 1, 0), (1, 1, 0), (0, 0, 1)])


def pentagon() -> Polytope:
    return from_vertices([(0, 0), (2, 0), (3, 2), (1, 3), (-1, 2)])


def standard_simplex(n: int) -> List[tuple]:
    points = [tuple([0] * n)]
    for i in range(n):
        points.append(tuple(int(i == j) for j in range(n)))
    return points


def simplex_product(*dims: int) -> Polytope:
    factors = [standard_simplex(d) for d in dims]
    return from_vertices([sum(parts, ()) for parts in cartesian(*factors)])


def random_affine_image(K: Polytope, rng: random.Random, spread: int = 3) -> Polytope:
    """K under a random invertible integer matrix plus a random integer offset."""
    n = K.dimension
    while True:
        matrix = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        if rank(matrix) == n:
            break
    offset = [rng.randint(-spread, spread) for _ in range(n)]
    images = [
        tuple(sum(matrix[i][j] * v[j] for j in range(n)) + offset[i] for i in range(n))
        for v in K.vertices
    ]
    return from_vertices(images)


def disk_alpha() -> SparsePoly:
    return SparsePoly.from_expression("1 - (x + 3/5)^2 - (y + 3/5)^2", ("x", "y"))


def disk_cone() -> GeneratedCone:
    """Cone generated by x, y and α; carries the zero-propagation pair for (0, 1/5)."""
    x = SparsePoly.variable(2, 0)
    y = SparsePoly.variable(2, 1)
    return GeneratedCone.of(
        [x, y, disk_alpha()],
        points=[DISK_POINT],
        point_pairs=[(DISK_POINT, DISK_MIRROR)],
        labels=("x", "y", "α"),
        name="disk",
    )


POLYTOPES: Dict[str, Callable[[], Polytope]] = {
    "interval": interval,
    "triangle": triangle,
    "square": square,
    "cube": cube,
    "trapezoid": trapezoid,
    "pyramid": pyramid,
    "pentagon": pentagon,
}


def polytope(name: str) -> Polytope:
    try:
        return POLYTOPES[name]()
    except KeyError:
        raise KeyError(f"unknown polytope {name!r}; known: {', '.join(POLYTOPES)}") from None


def polytope_cone(name: str) -> GeneratedCone:
    return GeneratedCone.from_polytope(polytope(name), name=name)


def parse_point(text: str) -> Sequence[Fraction]:
    return tuple(Fraction(part.strip()) for part in text.split(","))
