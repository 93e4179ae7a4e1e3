import random
from fractions import Fraction

import pytest

from multipoly import (
    PolynomialError,
    SparsePoly,
    divide_exact,
    poly_arith,
    positive_on_interval,
    sturm_count,
    x_adic_valuation,
)

XY = ("x", "y")


def _p(text, variables=XY):
    return SparsePoly.from_expression(text, variables)


def _random_poly(rng, nvars=2, degree=3):
    terms = {}
    for _ in range(rng.randint(0, 5)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(nvars)] += 1
        terms[tuple(exps)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return SparsePoly(nvars, terms)


def test_disk_products_expand_to_the_same_polynomial():
    beta = _p("1/5 - y")
    u = _p("y + 7/5")
    alpha = _p("7/25 - x^2 - 6/5*x - 6/5*y - y^2")
    target = _p("7/25 - 6/5*y - y^2")
    assert beta * u == target
    assert alpha + _p("x^2") + _p("6/5*x") == target


def test_zero_and_constant_handling():
    p = _p("x^2 - x*y + 3")
    assert p + SparsePoly.zero(2) == p
    assert (p - p).is_zero()
    assert SparsePoly.constant(2, 0).is_zero()
    assert SparsePoly.zero(2).degree == -1
    assert p.constant_term == 3


def test_square_of_a_sum():
    assert _p("x + y") ** 2 == _p("x^2 + 2*x*y + y^2")
    assert poly_arith("power", _p("x + y"), 0) == SparsePoly.constant(2, 1)


def test_evaluation():
    alpha = _p("7/25 - x^2 - 6/5*x - 6/5*y - y^2")
    assert alpha.evaluate((0, Fraction(1, 5))) == 0
    assert alpha.evaluate((0, Fraction(-7, 5))) == 0
    assert alpha.evaluate((0, 0)) == Fraction(7, 25)
    with pytest.raises(PolynomialError):
        alpha.evaluate((0,))


def test_format_is_highest_degree_first():
    assert _p("7/25 - 6/5*y - y^2").format(XY) == "-y^2 - 6/5*y + 7/25"
    assert str(SparsePoly.zero(1)) == "0"


def test_ring_laws_and_evaluation_homomorphism():
    rng = random.Random(7)
    for _ in range(40):
        p, q, r = (_random_poly(rng) for _ in range(3))
        assert p * (q + r) == p * q + p * r
        assert (p + q) - q == p
        point = (Fraction(rng.randint(-3, 3), 2), Fraction(rng.randint(-3, 3), 3))
        assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
        assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)


def test_mixed_variable_counts_are_rejected():
    with pytest.raises(PolynomialError):
        _p("x") + SparsePoly.variable(1, 0)


def test_sturm_counts_on_the_unit_interval():
    assert sturm_count(_p("2*x - 1", ("x",)), 0, 1) == 1
    assert sturm_count(SparsePoly.constant(1, 1), 0, 1) == 0
    assert sturm_count(_p("x^2 - x + 1", ("x",)), 0, 1) == 0


def test_sturm_count_matches_known_roots():
    rng = random.Random(13)
    x = SparsePoly.variable(1, 0)
    for _ in range(25):
        roots = rng.sample([Fraction(k, 8) for k in range(-8, 17)], 3)
        p = (x - roots[0]) * (x - roots[1]) * (x - roots[2])
        expected = sum(1 for r in roots if 0 < r <= 1)
        assert sturm_count(p, 0, 1) == expected


def test_positive_on_interval():
    assert positive_on_interval(_p("x^2 - x + 1", ("x",)))
    assert not positive_on_interval(_p("x", ("x",)))
    assert not positive_on_interval(_p("4*x^2 - 4*x + 1", ("x",)))


def test_valuation_and_exact_division():
    x_only = ("x",)
    assert x_adic_valuation(_p("2*x^3 - x^4", x_only)) == 3
    assert x_adic_valuation(_p("1 + x", x_only)) == 0
    assert divide_exact(_p("x + x^2", x_only), _p("1 + x", x_only)) == _p("x", x_only)
    with pytest.raises(PolynomialError):
        divide_exact(_p("x + 2", x_only), _p("1 + x", x_only))


def test_bad_expression_is_a_polynomial_error():
    with pytest.raises(PolynomialError):
        _p("1/x")


def test_json_text_is_a_polynomial_error():
    with pytest.raises(PolynomialError):
        _p('{"vars": ["x"], "terms": [{"coeff": "1", "exps": [1]}]}', ("x",))
