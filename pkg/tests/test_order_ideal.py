from fractions import Fraction

import pytest

from cone_cert import PreconditionError, SearchCaps, verify_certificate
from exact_linalg import check_farkas
from fixtures import cube, disk_cone, polytope_cone, pyramid, square, trapezoid, triangle
from multipoly import SparsePoly
from order_ideal import (
    Inconclusive,
    NotOrderUnitError,
    NotPositiveError,
    OrderIdealError,
    OrderIdealGen,
    Positive,
    combination_problem,
    dominate_linear,
    escalation,
    face_ideal_generators,
    facet_decompose,
    in_order_ideal,
    is_linear_positive,
    lemma2_positivity,
    linear_combination,
    relative_order_unit_bound,
    zero_faces,
    is_zariski_dense,
)
from polytope_geom import LinearForm, face_of

SMALL = SearchCaps(max_degree=4, max_m=8, grid_denominator_cap=64, grid_point_budget=2000)
APEX = (0, 0, 1)


def _x(text):
    return SparsePoly.from_expression(text, ("x",))


def _xy(text):
    return SparsePoly.from_expression(text, ("x", "y"))


def test_escalation_doubles_up_to_the_cap():
    assert escalation(8) == [1, 2, 4, 8]
    assert escalation(5) == [1, 2, 4, 5]
    assert escalation(1) == [1]


def test_square_is_in_the_ideal_of_x():
    cone = polytope_cone("interval")
    ideal = OrderIdealGen.generate([_x("x")], cone, SMALL)
    verdict = in_order_ideal(_x("x^2"), ideal, caps=SMALL)
    assert verdict.kind == "member"
    assert verdict.M == 1
    assert verify_certificate(_x("x - x^2"), verdict.upper, cone)
    assert verify_certificate(_x("x + x^2"), verdict.lower, cone)


def test_x_is_not_in_the_ideal_of_its_square():
    cone = polytope_cone("interval")
    ideal = OrderIdealGen.generate([_x("x^2")], cone, SMALL)
    verdict = in_order_ideal(_x("x"), ideal, M_cap=8, degree_cap=3, caps=SMALL)
    assert verdict.kind == "not-found"
    assert verdict.probes == ((1, "upper", "refuted"), (2, "upper", "refuted"),
                              (4, "upper", "refuted"), (8, "upper", "refuted"))


def test_zero_is_in_every_ideal():
    cone = polytope_cone("interval")
    ideal = OrderIdealGen.generate([_x("x^2")], cone, SMALL)
    assert in_order_ideal(SparsePoly.zero(1), ideal, caps=SMALL).M == 1


def test_generators_must_be_positive():
    with pytest.raises(NotPositiveError):
        OrderIdealGen.generate([_x("-x")], polytope_cone("interval"), SMALL)
    with pytest.raises(OrderIdealError):
        OrderIdealGen((), (), polytope_cone("interval"))


def test_face_ideal_generators():
    K = square()
    ideal = face_ideal_generators(K, K.vertex_face((0, 0)))
    assert ideal.indices == (0, 1)
    assert ideal.order_unit == _xy("x + y")

    P = pyramid()
    apex = face_ideal_generators(P, P.vertex_face(APEX))
    assert apex.indices == (1, 2, 3, 4)
    assert apex.order_unit == SparsePoly.from_expression("4 - 4*z", ("x", "y", "z"))

    T = triangle()
    assert face_ideal_generators(T, face_of(T, [0])).order_unit == _xy("x")


def test_whole_polytope_is_not_a_proper_face():
    K = triangle()
    with pytest.raises(OrderIdealError):
        face_ideal_generators(K, face_of(K, []))


@pytest.mark.parametrize("make", [cube, pyramid])
def test_face_order_unit_vanishes_exactly_on_the_face(make):
    K = make()
    for G in K.faces():
        unit = face_ideal_generators(K, G).order_unit
        for j, v in enumerate(K.vertices):
            assert (unit.evaluate(v) == 0) == (j in G.vertex_indices)


def test_face_ideal_as_order_ideal_uses_single_generators():
    K = square()
    cone = polytope_cone("square")
    ideal = face_ideal_generators(K, K.vertex_face((0, 0))).as_order_ideal(cone)
    verdict = in_order_ideal(_xy("x*y + x^2"), ideal, caps=SMALL)
    assert verdict.kind == "member"


def test_linear_combination():
    K = square()
    combo = linear_combination(K, LinearForm.of(2, (0, 0)))
    assert isinstance(combo, dict)
    assert is_linear_positive(K, LinearForm.of(0, (0, 1)))
    assert not is_linear_positive(K, LinearForm.of(0, (-1, 0)))


def test_square_domination_needs_three():
    K = square()
    result = dominate_linear(K, K.vertex_face((0, 0)), LinearForm.of(0, (1, 1)), LinearForm.of(0, (3, 2)))
    assert result.M == 3
    assert result.farkas_below is not None
    assert not isinstance(result.farkas_below, dict)


def test_trapezoid_domination_is_immediate():
    K = trapezoid()
    result = dominate_linear(K, K.vertex_face((0, 0)), LinearForm.of(0, (1, 1)), LinearForm.of(0, (1, 0)))
    assert result.M == 1
    assert result.farkas_below is None


def test_domination_rejects_a_beta_with_a_larger_zero_set():
    K = square()
    with pytest.raises(PreconditionError):
        dominate_linear(K, K.vertex_face((0, 0)), LinearForm.of(0, (1, 0)), LinearForm.of(0, (1, 0)))


def test_facet_decompose():
    K = square()
    G = K.vertex_face((0, 0))
    assert facet_decompose(K, G, LinearForm.of(0, (1, 1))) == {0: 1, 1: 1}
    assert facet_decompose(K, G, LinearForm.of(0, (2, 3))) == {0: 2, 1: 3}

    P = pyramid()
    half = Fraction(1, 2)
    assert facet_decompose(P, P.vertex_face(APEX), LinearForm.of(2, (0, 0, -2))) == {1: half, 2: half, 3: half, 4: half}


def test_opposite_slanted_pair_is_a_relative_order_unit():
    P = pyramid()
    assert relative_order_unit_bound(P, P.vertex_face(APEX), LinearForm.of(2, (0, 0, -2))) == 2


def test_zero_faces_of_monomial_ideals():
    K = square()
    both_axes = zero_faces(K, [[1, 1, 0, 0]])
    assert sorted(sorted(f.facets) for f in both_axes.faces) == [[0], [1]]
    assert is_zariski_dense(both_axes)

    one_axis = zero_faces(K, [[1, 1, 0, 0], [1, 0, 0, 1]])
    assert [sorted(f.facets) for f in one_axis.faces] == [[0]]


def test_trapezoid_zero_set_misses_the_polytope():
    zs = zero_faces(trapezoid(), [[1, 0, 0, 0], [0, 0, 0, 1]])
    assert not zs.meets_polytope
    assert [flat.point for flat in zs.flats] == [(0, 2)]
    assert not is_zariski_dense(zs)


def test_pyramid_apex_ideal_is_dense():
    zs = zero_faces(pyramid(), [[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    assert [f.vertices for f in zs.faces] == [(APEX,)]
    assert is_zariski_dense(zs)


def test_positivity_from_an_order_unit_multiple_on_the_interval():
    result = lemma2_positivity(_x("1 + x"), _x("x"), polytope_cone("interval"), SMALL)
    assert isinstance(result, Positive)
    assert result.certificate.as_dict() == {(1, 0): 1}
    assert [record.stage for record in result.trace] == ["order-unit", "product", "ideal", "certificate"]


def test_positivity_of_zero_is_immediate():
    result = lemma2_positivity(_x("1 + x"), SparsePoly.zero(1), polytope_cone("interval"), SMALL)
    assert isinstance(result, Positive)
    assert result.certificate.is_empty


def test_disk_beta_stops_at_the_ideal_stage():
    result = lemma2_positivity(_xy("y + 7/5"), _xy("1/5 - y"), disk_cone(), SMALL)
    assert isinstance(result, Inconclusive)
    assert result.stage == "ideal"


def test_positivity_needs_an_order_unit():
    with pytest.raises(NotOrderUnitError):
        lemma2_positivity(_x("x"), _x("x"), polytope_cone("interval"), SMALL)


def _grid(n, steps=8):
    ticks = [Fraction(k, steps) for k in range(steps + 1)]
    if n == 1:
        return [(t,) for t in ticks]
    return [(s, t) for s in ticks for t in ticks]


@pytest.mark.parametrize("setting, generators, r, variables", [
    ("interval", ["x"], "x^2", ("x",)),
    ("interval", ["x^2"], "x^3 - x^2", ("x",)),
    ("square", ["x", "y"], "x*y + x^2", ("x", "y")),
    ("square", ["x", "y"], "x - 2*y", ("x", "y")),
])
def test_ideal_members_are_bracketed_at_admissible_points(setting, generators, r, variables):
    cone = polytope_cone(setting)
    ideal = OrderIdealGen.generate([SparsePoly.from_expression(t, variables) for t in generators], cone, SMALL)
    target = SparsePoly.from_expression(r, variables)
    verdict = in_order_ideal(target, ideal, caps=SMALL)
    assert verdict.kind == "member"
    bound = ideal.order_unit.scale(verdict.M)
    for p in _grid(len(variables)):
        assert cone.is_admissible(p)
        assert -bound.evaluate(p) <= target.evaluate(p) <= bound.evaluate(p)


def test_square_domination_farkas_vector_checks_out():
    K = square()
    beta, gamma = LinearForm.of(0, (1, 1)), LinearForm.of(0, (3, 2))
    result = dominate_linear(K, K.vertex_face((0, 0)), beta, gamma)
    assert check_farkas(combination_problem(K, beta.scale(result.M - 1) - gamma), result.farkas_below)
    assert not check_farkas(combination_problem(K, beta.scale(result.M) - gamma), result.farkas_below)


def test_zero_ideal_vanishes_on_the_whole_polytope():
    K = square()
    zs = zero_faces(K, [])
    assert [f.vertex_indices for f in zs.faces] == [frozenset(range(4))]
    assert [flat.dimension for flat in zs.flats] == [2]
    assert zs.meets_polytope
    assert is_zariski_dense(zs)


def test_unit_ideal_has_no_zeros():
    zs = zero_faces(square(), [[0, 0, 0, 0], [1, 0, 0, 0]])
    assert zs.faces == () and zs.flats == ()


def test_cube_face_ideals_are_dense():
    K = cube()
    for G in K.faces():
        facets = sorted(face_ideal_generators(K, G).indices)
        monomials = [[int(i == j) for i in range(K.num_facets)] for j in facets]
        zs = zero_faces(K, monomials)
        assert [f.vertex_indices for f in zs.faces] == [G.vertex_indices]
        assert len(zs.flats) == 1 and zs.flats[0].same_as(G.hull)
        assert is_zariski_dense(zs)
