"""
Exact decision procedures for the two toy orderings on Q[x].

R1⁺ = {x^j (1+x) f : j ≥ 1, f > 0 on [0,1]} ∪ {f : f > 0 on [0,1]}
R2⁺ = {x^j f : j ∈ {0, 2, 3, ...}, f > 0 on [0,1]}

0 is treated as a member of both cones. Every answer is exact: strict
positivity on [0,1] is decided with Sturm sequences.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from multipoly import PolynomialError, SparsePoly, divide_exact, positive_on_interval, x_adic_valuation
from utils import get_logger

logger = get_logger("toy")

TOY_RINGS = ("r1", "r2")

ONE_PLUS_X = SparsePoly(1, {(0,): 1, (1,): 1})


def _univariate(p: SparsePoly):
    if p.nvars != 1:
        raise PolynomialError(f"toy rings live in Q[x]; got {p.nvars} variables")


def strip_x_power(p: SparsePoly) -> Tuple[int, SparsePoly]:
    """(j, p / x^j) with j the x-adic valuation."""
    j = x_adic_valuation(p)
    return j, SparsePoly(1, {(e[0] - j,): c for e, c in p.terms.items()})


def toy_order_unit(p: SparsePoly) -> bool:
    _univariate(p)
    return positive_on_interval(p, 0, 1)


def toy_r1_member(p: SparsePoly) -> bool:
    _univariate(p)
    if p.is_zero() or positive_on_interval(p, 0, 1):
        return True
    j, rest = strip_x_power(p)
    if j < 1:
        return False
    try:
        f = divide_exact(rest, ONE_PLUS_X)
    except PolynomialError:
        return False
    return positive_on_interval(f, 0, 1)


def toy_r2_member(p: SparsePoly) -> bool:
    _univariate(p)
    if p.is_zero():
        return True
    j, rest = strip_x_power(p)
    return j != 1 and positive_on_interval(rest, 0, 1)


def toy_member(ring: str, p: SparsePoly) -> bool:
    if ring == "r1":
        return toy_r1_member(p)
    if ring == "r2":
        return toy_r2_member(p)
    raise ValueError(f"unknown toy ring {ring!r}; expected one of {TOY_RINGS}")


@dataclass(frozen=True)
class ToyIdealVerdict:
    M: Optional[int]
    M_cap: int
    rejected: Tuple[int, ...]

    @property
    def member(self) -> bool:
        return self.M is not None


def toy_in_order_ideal(r: SparsePoly, t: SparsePoly, ring: str, M_cap: int) -> ToyIdealVerdict:
    """Least M ≤ M_cap with M·t ± r in the toy cone; each rejection is an exact decision."""
    if not toy_member(ring, t):
        raise ValueError(f"{t} is not positive in {ring}")
    rejected = []
    for M in range(1, M_cap + 1):
        bound = t.scale(M)
        if toy_member(ring, bound - r) and toy_member(ring, bound + r):
            return ToyIdealVerdict(M, M_cap, tuple(rejected))
        rejected.append(M)
    logger.info("%s not in <%s> of %s for M <= %d", r, t, ring, M_cap)
    return ToyIdealVerdict(None, M_cap, tuple(rejected))
