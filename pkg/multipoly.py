"""
Exact sparse multivariate polynomials over the rationals.

Terms are keyed by dense exponent tuples of length ``nvars``. Univariate
helpers (valuation, exact division, Sturm counting) delegate the polynomial
remainder sequences to sympy and keep the sign bookkeeping in Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.polyerrors import CoercionFailed, GeneratorsError

from exact_linalg import to_rational

Exponent = Tuple[int, ...]


class PolynomialError(ValueError):
    """Mismatched variable counts, non-univariate input, or inexact division"""


def default_variables(n: int) -> Tuple[str, ...]:
    if n <= 4:
        return ("x", "y", "z", "w")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def _term_order(item):
    exps = item[0]
    return (sum(exps), exps)


class SparsePoly:
    """Immutable polynomial; equality is coefficient-wise exact equality."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        if nvars < 0:
            raise PolynomialError("variable count must be nonnegative")
        clean: Dict[Exponent, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise PolynomialError(f"exponent {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise PolynomialError(f"negative exponent in {exps}")
            clean[exps] = clean.get(exps, Fraction(0)) + to_rational(coeff)
        self.nvars = nvars
        self._terms = dict(sorted(((e, c) for e, c in clean.items() if c), key=_term_order))
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "SparsePoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "SparsePoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def affine(cls, constant, coeffs: Sequence) -> "SparsePoly":
        n = len(coeffs)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(n, terms)

    @classmethod
    def from_expression(cls, text: str, variables: Sequence[str]) -> "SparsePoly":
        """Parse e.g. ``"1/5 - y"`` or ``"x^2 - x + 1"`` over the given variable names."""
        symbols = sympy.symbols(list(variables))
        local = dict(zip(variables, symbols))
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
            poly = sympy.Poly(expr, *symbols, domain="QQ")
        except (sympy.SympifyError, sympy.PolynomialError, CoercionFailed, GeneratorsError, TypeError) as e:
            raise PolynomialError(f"cannot read polynomial {text!r}: {e}") from e
        return from_sympy(poly)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def monomials(self) -> Tuple[Exponent, ...]:
        return tuple(self._terms)

    def linear_part(self) -> Tuple[Fraction, ...]:
        """Coefficients of x_1..x_n (degree-one part only)."""
        out = []
        for i in range(self.nvars):
            exps = [0] * self.nvars
            exps[i] = 1
            out.append(self.coefficient(exps))
        return tuple(out)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise PolynomialError(f"variable counts differ: {self.nvars} vs {other.nvars}")
            return other
        return SparsePoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return SparsePoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor) -> "SparsePoly":
        factor = to_rational(factor)
        return SparsePoly(self.nvars, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return SparsePoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError(f"power must be a nonnegative integer, got {k!r}")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            return self == SparsePoly.constant(self.nvars, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self._terms.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise PolynomialError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        point = [to_rational(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for v, e in zip(point, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    __call__ = evaluate

    def format(self, variables: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        names = variables or default_variables(self.nvars)
        pieces = []
        for exps, coeff in reversed(list(self._terms.items())):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{magnitude}*" + "*".join(factors)
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"SparsePoly({self.format()!r}, nvars={self.nvars})"


def evaluate(p: SparsePoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def poly_arith(op: str, *operands) -> SparsePoly:
    """add | mul over polynomials, scale (poly, scalar), power (poly, k)."""
    if not operands:
        raise PolynomialError("no operands")
    if op == "add":
        result = operands[0]
        for p in operands[1:]:
            result = result + p
        return result
    if op == "mul":
        result = operands[0]
        for p in operands[1:]:
            if not isinstance(p, SparsePoly):
                raise PolynomialError("mul expects polynomials; use scale for scalars")
            result = result * p
        return result
    if op == "scale":
        poly, factor = operands
        return poly.scale(factor)
    if op == "power":
        poly, k = operands
        return poly ** k
    raise PolynomialError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# sympy bridge and univariate tools
# ---------------------------------------------------------------------------

def to_sympy(p: SparsePoly, variables: Optional[Sequence[str]] = None) -> sympy.Poly:
    gens = sympy.symbols(list(variables or default_variables(p.nvars)))
    data = {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(data, *gens, domain="QQ")


def from_sympy(poly: sympy.Poly) -> SparsePoly:
    return SparsePoly(len(poly.gens), {m: to_rational(c) for m, c in poly.terms() if c != 0})


def _require_univariate(p: SparsePoly):
    if p.nvars != 1:
        raise PolynomialError(f"expected a univariate polynomial, got {p.nvars} variables")


def x_adic_valuation(p: SparsePoly) -> int:
    """Largest j with x^j dividing p."""
    _require_univariate(p)
    if p.is_zero():
        raise PolynomialError("the zero polynomial has no valuation")
    return min(e[0] for e in p.monomials())


def divide_exact(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    _require_univariate(p)
    _require_univariate(q)
    if q.is_zero():
        raise PolynomialError("division by the zero polynomial")
    quotient, remainder = to_sympy(p).div(to_sympy(q))
    if not remainder.is_zero:
        raise PolynomialError(f"{q} does not divide {p}")
    return from_sympy(quotient)


def sturm_sequence(p: SparsePoly) -> List[SparsePoly]:
    _require_univariate(p)
    if p.is_zero():
        raise PolynomialError("Sturm sequence of the zero polynomial")
    if p.is_constant():
        return [p]
    return [from_sympy(s) for s in to_sympy(p).sturm()]


def sign_variations(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: SparsePoly, a, b) -> int:
    """Number of distinct real roots of p in (a, b]."""
    a, b = to_rational(a), to_rational(b)
    if a > b:
        raise PolynomialError(f"empty interval [{a}, {b}]")
    sequence = sturm_sequence(p)
    return sign_variations(s.evaluate((a,)) for s in sequence) - sign_variations(s.evaluate((b,)) for s in sequence)


def positive_on_interval(p: SparsePoly, a=0, b=1) -> bool:
    """Strict positivity on the closed interval [a, b]."""
    _require_univariate(p)
    if p.is_zero():
        return False
    a, b = to_rational(a), to_rational(b)
    if p.evaluate((a,)) <= 0 or p.evaluate((b,)) <= 0:
        return False
    return sturm_count(p, a, b) == 0
