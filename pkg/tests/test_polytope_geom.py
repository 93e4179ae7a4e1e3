from fractions import Fraction

import pytest

from exact_linalg import rank
from fixtures import POLYTOPES, cube, pyramid, square, trapezoid, triangle
from polytope_geom import (
    EmptyInteriorError,
    LinearForm,
    NotAFaceError,
    NotFullDimensionalError,
    UnboundedRegionError,
    face_of,
    facets_containing,
    from_halfspaces,
    from_vertices,
)


def _formats(K):
    return [f.format() for f in K.facet_forms]


def test_facet_forms_of_the_small_polytopes():
    assert _formats(triangle()) == ["x", "y", "-x - y + 1"]
    assert _formats(square()) == ["x", "y", "-x + 1", "-y + 1"]
    assert _formats(trapezoid()) == ["x", "y", "-y + 1", "-x - y + 2"]
    assert len(pyramid().facet_forms) == 5


def test_halfspaces_of_a_triangle():
    K = from_halfspaces([LinearForm.of(0, (1, 0)), LinearForm.of(0, (0, 1)), LinearForm.of(1, (-1, -1))])
    assert K.vertices == ((0, 0), (0, 1), (1, 0))


def test_redundant_halfspace_is_dropped():
    forms = [LinearForm.of(0, (1, 0)), LinearForm.of(0, (0, 1)), LinearForm.of(1, (-1, 0)),
             LinearForm.of(1, (0, -1)), LinearForm.of(2, (-1, -1))]
    K = from_halfspaces(forms)
    assert len(K.vertices) == 4
    assert K.num_facets == 4


def test_unbounded_halfspaces_report_a_ray():
    with pytest.raises(UnboundedRegionError) as info:
        from_halfspaces([LinearForm.of(0, (1, 0)), LinearForm.of(0, (0, 1))])
    ray = info.value.ray
    assert ray == (1, 1)


def test_flat_region_has_empty_interior():
    forms = [LinearForm.of(0, (1, 0)), LinearForm.of(0, (-1, 0)), LinearForm.of(0, (0, 1)), LinearForm.of(1, (0, -1))]
    with pytest.raises(EmptyInteriorError):
        from_halfspaces(forms)


def test_collinear_points_are_not_full_dimensional():
    points = [(0, 0), (1, 1), (2, 2)]
    with pytest.raises(NotFullDimensionalError) as info:
        from_vertices(points)
    dependency = info.value.dependency
    assert all(dependency.evaluate(p) == 0 for p in points)


def test_interior_points_are_not_vertices():
    K = from_vertices([(0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), 0), (Fraction(1, 3), Fraction(1, 3))])
    assert len(K.vertices) == 4


@pytest.mark.parametrize("name", ["square", "cube", "pyramid", "trapezoid", "pentagon"])
def test_vertices_and_halfspaces_describe_the_same_polytope(name):
    K = POLYTOPES[name]()
    again = from_halfspaces(K.facet_forms)
    assert again.vertices == K.vertices
    assert again.facet_forms == K.facet_forms


def test_faces_of_the_triangle():
    K = triangle()
    edge = face_of(K, [0])
    assert edge.dimension == 1
    assert edge.hull.contains_point((0, 0)) and edge.hull.contains_point((0, 1))
    assert not edge.hull.contains_point((1, 0))
    faces = K.faces()
    assert sorted(f.dimension for f in faces) == [0, 0, 0, 1, 1, 1]


def test_square_corner_face():
    G = face_of(square(), [0, 1])
    assert G.vertices == ((0, 0),)
    assert G.dimension == 0


def test_empty_face_keeps_its_flat():
    G = face_of(trapezoid(), [0, 3])
    assert G.is_empty
    assert G.flat.point == (0, 2)
    with pytest.raises(NotAFaceError):
        facets_containing(trapezoid(), G)


def test_facets_containing():
    assert facets_containing(square(), square().vertex_face((0, 0))) == {0, 1}
    P = pyramid()
    assert facets_containing(P, P.vertex_face((0, 0, 1))) == {1, 2, 3, 4}
    assert facets_containing(triangle(), face_of(triangle(), [0])) == {0}


def test_cube_has_twenty_six_proper_faces():
    assert len(cube().faces()) == 26


@pytest.mark.parametrize("name", ["triangle", "square", "cube", "pyramid", "pentagon"])
def test_face_centres_are_relative_interior_points(name):
    K = POLYTOPES[name]()
    for G in K.faces():
        defining = facets_containing(K, G)
        for i, form in enumerate(K.facet_forms):
            value = form.evaluate(G.interior_point)
            if i in defining:
                assert value == 0
            else:
                assert value > 0


@pytest.mark.parametrize("name", ["triangle", "square", "cube", "pyramid"])
def test_face_dimension_plus_normal_rank_is_the_ambient_dimension(name):
    K = POLYTOPES[name]()
    for G in K.faces():
        normals = [K.facet_forms[i].coeffs for i in facets_containing(K, G)]
        assert G.dimension + rank(normals) == K.dimension


def test_index_of_accepts_unnormalized_forms():
    K = square()
    assert K.index_of(LinearForm.of(2, (-2, 0))) == 2
    with pytest.raises(NotAFaceError):
        K.index_of(LinearForm.of(2, (-1, 0)))
