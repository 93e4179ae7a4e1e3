import pytest

from multipoly import PolynomialError, SparsePoly
from toy_rings import (
    strip_x_power,
    toy_in_order_ideal,
    toy_member,
    toy_order_unit,
    toy_r1_member,
    toy_r2_member,
)


def _x(text):
    return SparsePoly.from_expression(text, ("x",))


def test_r1_members():
    assert toy_r1_member(_x("x + x^2"))
    assert toy_r1_member(_x("1"))
    assert toy_r1_member(_x("x^2 - x + 1"))
    assert toy_r1_member(SparsePoly.zero(1))
    assert not toy_r1_member(_x("x"))
    assert not toy_r1_member(_x("x^2"))
    assert not toy_r1_member(_x("-1"))


def test_r2_members():
    assert toy_r2_member(_x("x^2"))
    assert toy_r2_member(_x("x^3"))
    assert toy_r2_member(_x("1 + x"))
    assert not toy_r2_member(_x("x"))
    assert not toy_r2_member(_x("x + x^2"))
    assert not toy_r2_member(_x("x^2 - x^3"))


def test_order_units_are_strictly_positive_on_the_interval():
    assert toy_order_unit(_x("1 + x"))
    assert not toy_order_unit(_x("x"))
    assert not toy_order_unit(_x("1 - x"))


def test_strip_x_power():
    j, rest = strip_x_power(_x("2*x^3 - x^4"))
    assert j == 3
    assert rest == _x("2 - x")


def test_cancellation_fails_in_r1():
    u, a = _x("1 + x"), _x("x")
    assert toy_order_unit(u)
    assert toy_member("r1", u * a)
    assert not toy_member("r1", a)


def test_cube_is_in_the_ideal_of_the_square_in_r2():
    verdict = toy_in_order_ideal(_x("x^3"), _x("x^2"), "r2", 64)
    assert verdict.member
    assert verdict.M == 2
    assert verdict.rejected == (1,)


def test_x_is_not_in_the_ideal_of_the_square_in_r2():
    verdict = toy_in_order_ideal(_x("x"), _x("x^2"), "r2", 64)
    assert not verdict.member
    assert verdict.rejected == tuple(range(1, 65))


def test_bad_inputs():
    with pytest.raises(ValueError):
        toy_member("r3", _x("x"))
    with pytest.raises(ValueError):
        toy_in_order_ideal(_x("x"), _x("x"), "r2", 4)
    with pytest.raises(PolynomialError):
        toy_r1_member(SparsePoly.from_expression("x + y", ("x", "y")))
