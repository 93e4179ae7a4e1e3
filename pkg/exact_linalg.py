"""
Exact rational linear algebra and linear programming.

Every scalar is a ``fractions.Fraction``; nothing in here rounds. The LP engine
is a two-phase tableau simplex with Bland's rule, returning either a feasible
(optionally optimal) point or a Farkas certificate read off the final phase-one
basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from utils import get_logger

logger = get_logger("linalg")

Rational = Fraction
Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

NONNEG = "nonnegative"
FREE = "free"

ZERO = Fraction(0)
ONE = Fraction(1)


class LinearAlgebraError(ValueError):
    """Base error for the exact linear algebra layer"""


class DimensionMismatchError(LinearAlgebraError):
    """Matrix, right-hand side and sign list do not fit together"""


class UnboundedObjectiveError(LinearAlgebraError):
    """The LP objective decreases without bound along a feasible ray"""

    def __init__(self, column):
        super().__init__(f"objective unbounded along variable {column}")
        self.column = column


def to_rational(value) -> Fraction:
    """Convert ints, strings ("p/q"), Fractions and sympy rationals to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def format_rational(value) -> str:
    return str(to_rational(value))


def vector(values: Sequence) -> Vector:
    return tuple(to_rational(v) for v in values)


def matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(vector(r) for r in rows)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatchError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def mat_vec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, x) for row in A)


def primitive(values: Sequence[Fraction]) -> Vector:
    """Positive rescaling to coprime integers (zero vector stays zero)."""
    values = vector(values)
    denominators = 1
    for v in values:
        denominators = denominators * v.denominator // gcd(denominators, v.denominator)
    ints = [int(v * denominators) for v in values]
    content = 0
    for i in ints:
        content = gcd(content, abs(i))
    if content == 0:
        return values
    return tuple(Fraction(i // content) for i in ints)


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and the pivot columns."""
    R = [[to_rational(v) for v in r] for r in rows]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = ONE / R[r][c]
        R[r] = [v * inv for v in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of A·x = b: particular + span(nullspace), or inconsistent."""
    particular: Optional[Vector]
    nullspace: Tuple[Vector, ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.consistent and not self.nullspace


def linear_solve(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> LinearSolution:
    A = matrix(A)
    b = vector(b)
    if len(A) != len(b):
        raise DimensionMismatchError(f"{len(A)} rows but right-hand side of length {len(b)}")
    if ncols is None:
        if not A:
            raise DimensionMismatchError("empty system needs an explicit column count")
        ncols = len(A[0])
    if any(len(row) != ncols for row in A):
        raise DimensionMismatchError("rows of A have inconsistent lengths")

    R, pivots = rref([list(row) + [rhs] for row, rhs in zip(A, b)])
    if ncols in pivots:
        return LinearSolution(None, ())

    particular = [ZERO] * ncols
    for i, c in enumerate(pivots):
        particular[c] = R[i][ncols]

    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [ZERO] * ncols
        v[free] = ONE
        for i, c in enumerate(pivots):
            v[c] = -R[i][free]
        basis.append(tuple(v))
    return LinearSolution(tuple(particular), tuple(basis))


def nullspace(A: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[Vector, ...]:
    return linear_solve(A, [ZERO] * len(A), ncols=ncols).nullspace


# ---------------------------------------------------------------------------
# Linear programming
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPProblem:
    """A·x = b with per-variable sign constraints; optional objective to minimize."""
    A: Matrix
    b: Vector
    signs: Tuple[str, ...]
    objective: Optional[Vector] = None

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise DimensionMismatchError(f"{len(self.A)} rows but {len(self.b)} right-hand sides")
        n = len(self.signs)
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise DimensionMismatchError(f"row {i} has {len(row)} entries, expected {n}")
        if any(s not in (NONNEG, FREE) for s in self.signs):
            raise DimensionMismatchError(f"unknown sign constraint in {self.signs}")
        if self.objective is not None and len(self.objective) != n:
            raise DimensionMismatchError("objective length differs from variable count")

    @classmethod
    def build(cls, A, b, signs=None, objective=None, num_vars=None) -> "LPProblem":
        A = matrix(A)
        if num_vars is None:
            num_vars = len(A[0]) if A else len(signs or ())
        return cls(
            A=A,
            b=vector(b),
            signs=tuple(signs) if signs is not None else (NONNEG,) * num_vars,
            objective=vector(objective) if objective is not None else None,
        )

    @property
    def num_vars(self) -> int:
        return len(self.signs)


@dataclass(frozen=True)
class Feasible:
    solution: Vector
    objective_value: Optional[Fraction] = None

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    farkas: Vector

    feasible = False


LPOutcome = Union[Feasible, Infeasible]


def check_feasible(problem: LPProblem, x: Sequence[Fraction]) -> bool:
    if len(x) != problem.num_vars:
        return False
    if any(s == NONNEG and v < 0 for s, v in zip(problem.signs, x)):
        return False
    return mat_vec(problem.A, x) == problem.b


def check_farkas(problem: LPProblem, y: Sequence[Fraction]) -> bool:
    """yᵀA ≥ 0 on nonnegative columns, = 0 on free columns, and yᵀb < 0."""
    if len(y) != len(problem.A):
        return False
    for j, sign in enumerate(problem.signs):
        column_value = sum((y[i] * problem.A[i][j] for i in range(len(y))), ZERO)
        if sign == NONNEG and column_value < 0:
            return False
        if sign == FREE and column_value != 0:
            return False
    return dot(y, problem.b) < 0


class _Tableau:
    """Dense tableau over Fractions; columns past ``width`` are artificial."""

    def __init__(self, rows, rhs, basis, width):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.width = width

    def pivot(self, r, c):
        piv = self.rows[r][c]
        row = [v / piv for v in self.rows[r]]
        self.rows[r] = row
        self.rhs[r] = self.rhs[r] / piv
        support = [(k, v) for k, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for k, v in support:
                    other[k] -= f * v
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def minimize(self, cost, allowed):
        """Bland's rule: lowest-index entering column, lowest-index leaving basic variable."""
        pivots = 0
        while True:
            basic = set(self.basis)
            priced = [(i, cost[b]) for i, b in enumerate(self.basis) if cost[b]]
            entering = None
            for j in range(allowed):
                if j in basic:
                    continue
                reduced = cost[j] - sum((cb * self.rows[i][j] for i, cb in priced), ZERO)
                if reduced < 0:
                    entering = j
                    break
            if entering is None:
                logger.debug("simplex optimal after %d pivots", pivots)
                return "optimal"
            leaving = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (self.rhs[i] / row[entering], self.basis[i])
                    if leaving is None or key < leaving[0]:
                        leaving = (key, i)
            if leaving is None:
                return "unbounded"
            self.pivot(leaving[1], entering)
            pivots += 1


def lp_solve(problem: LPProblem) -> LPOutcome:
    """Exact two-phase simplex; deterministic for a fixed input."""
    m = len(problem.A)

    columns: List[Tuple[int, int]] = []
    for j, sign in enumerate(problem.signs):
        columns.append((j, 1))
        if sign == FREE:
            columns.append((j, -1))
    width = len(columns)

    flip = [-1 if problem.b[i] < 0 else 1 for i in range(m)]
    rows = []
    for i in range(m):
        row = [flip[i] * s * problem.A[i][j] for j, s in columns]
        row.extend(ONE if k == i else ZERO for k in range(m))
        rows.append(row)
    tableau = _Tableau(rows, [flip[i] * problem.b[i] for i in range(m)], [width + i for i in range(m)], width)

    phase_one_cost = [ZERO] * width + [ONE] * m
    tableau.minimize(phase_one_cost, width + m)
    infeasibility = sum((tableau.rhs[i] for i, b in enumerate(tableau.basis) if b >= width), ZERO)

    if infeasibility > 0:
        dual = [
            sum((phase_one_cost[b] * tableau.rows[i][width + k] for i, b in enumerate(tableau.basis)), ZERO)
            for k in range(m)
        ]
        farkas = primitive([-flip[k] * dual[k] for k in range(m)])
        if not check_farkas(problem, farkas):
            raise LinearAlgebraError("internal error: extracted Farkas certificate does not verify")
        logger.debug("LP infeasible (%d rows, %d vars)", m, problem.num_vars)
        return Infeasible(farkas)

    # Drive artificial variables out of the basis; rows that cannot pivot are redundant.
    redundant = []
    for i, b in enumerate(tableau.basis):
        if b >= width:
            col = next((j for j in range(width) if tableau.rows[i][j] != 0), None)
            if col is None:
                redundant.append(i)
            else:
                tableau.pivot(i, col)
    for i in reversed(redundant):
        del tableau.rows[i]
        del tableau.rhs[i]
        del tableau.basis[i]

    objective_value = None
    if problem.objective is not None:
        cost = [s * problem.objective[j] for j, s in columns] + [ZERO] * m
        if tableau.minimize(cost, width) == "unbounded":
            raise UnboundedObjectiveError(next(j for j in range(width) if j not in tableau.basis))

    expanded = [ZERO] * width
    for i, b in enumerate(tableau.basis):
        if b < width:
            expanded[b] = tableau.rhs[i]
    x = [ZERO] * problem.num_vars
    for (j, s), value in zip(columns, expanded):
        x[j] += s * value
    x = tuple(x)

    if not check_feasible(problem, x):
        raise LinearAlgebraError("internal error: simplex solution does not satisfy A·x = b")
    if problem.objective is not None:
        objective_value = dot(problem.objective, x)
    return Feasible(x, objective_value)


def interior_solution(A: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """A strictly positive solution of A·a = b, or None if every solution has a zero entry.

    Chooses the average of the per-coordinate maximizers, so the answer is
    deterministic. The nonnegative solution set must be bounded.
    """
    A = matrix(A)
    b = vector(b)
    n = len(A[0]) if A else 0
    if n == 0:
        return None
    if not lp_solve(LPProblem.build(A, b, num_vars=n)).feasible:
        return None
    maximizers = []
    for i in range(n):
        objective = [ZERO] * n
        objective[i] = -ONE
        outcome = lp_solve(LPProblem.build(A, b, objective=objective, num_vars=n))
        if outcome.solution[i] <= 0:
            return None
        maximizers.append(outcome.solution)
    return tuple(sum(column, ZERO) / n for column in zip(*maximizers))
