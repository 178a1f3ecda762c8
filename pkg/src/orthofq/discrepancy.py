"""Hyperplane discrepancy of a point set, in exact integer arithmetic.

The discrepancy of E at a tuple (x^1, ..., x^j) compares |E cap H| with the
expected size |E| q^-j, where H is the common orthogonal complement of the
tuple. The character-sum form restricts every dual variable to F_q^*; summing
an additive character over F_q^* gives q [a = 0] - 1, so each product of
characters becomes a product of integer weights w_i(y) = q [x^i . y = 0] - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .counting import BudgetExceeded
from .geometry import FVector, PointSet, all_coords, dot_enc, orthogonality_matrix

DEFAULT_TUPLE_BUDGET = 10**7


def _frac(x: Fraction | None) -> list[int] | None:
    return None if x is None else [x.numerator, x.denominator]


def _check_tuple(E: PointSet, tup: Sequence[FVector]) -> None:
    for x in tup:
        if x.field != E.field or x.d != E.d:
            raise ValueError(f"tuple vector {x} is not in {E.field}^{E.d}")


def _weights(E: PointSet, tup: Sequence[FVector]) -> list[list[int]]:
    q, f = E.q, E.field
    pts = [v.coords for v in E]
    return [[q - 1 if dot_enc(f, x.coords, y) == 0 else -1 for y in pts] for x in tup]


def discrepancy_direct(E: PointSet, tup: Sequence[FVector]) -> Fraction:
    """|E cap H_tup| - |E| q^-j."""
    _check_tuple(E, tup)
    f = E.field
    hits = sum(
        1 for y in E if all(dot_enc(f, x.coords, y.coords) == 0 for x in tup)
    )
    return hits - Fraction(len(E), E.q ** len(tup))


@dataclass(frozen=True)
class ScaledDiscrepancy:
    tuple: tuple[FVector, ...]
    scaled: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.scaled, self.q ** len(self.tuple))


def _subset_sum(weights: list[list[int]], n: int, T: Sequence[int]) -> int:
    total = 0
    for col in range(n):
        prod = 1
        for i in T:
            prod *= weights[i][col]
        total += prod
    return total


def discrepancy_charsum(E: PointSet, tup: Sequence[FVector]) -> ScaledDiscrepancy:
    """Character-sum discrepancy S / q^j with S = sum_{y in E} prod_i (q [x^i . y = 0] - 1)."""
    _check_tuple(E, tup)
    if not tup:
        raise ValueError("character-sum discrepancy needs at least one tuple vector")
    w = _weights(E, tup)
    S = _subset_sum(w, len(E), range(len(tup)))
    return ScaledDiscrepancy(tuple(tup), S, E.q)


@dataclass(frozen=True)
class SubsetExpansion:
    holds: bool
    lhs: int
    rhs: int
    terms: dict[tuple[int, ...], int]


def subset_expansion_check(E: PointSet, tup: Sequence[FVector]) -> SubsetExpansion:
    """Check q^j |E cap H| == sum over subsets T of S_T exactly."""
    _check_tuple(E, tup)
    j = len(tup)
    f = E.field
    hits = sum(1 for y in E if all(dot_enc(f, x.coords, y.coords) == 0 for x in tup))
    w = _weights(E, tup)
    terms = {
        T: _subset_sum(w, len(E), T)
        for r in range(j + 1)
        for T in itertools.combinations(range(j), r)
    }
    lhs = E.q**j * hits
    rhs = sum(terms.values())
    return SubsetExpansion(lhs == rhs, lhs, rhs, terms)


@dataclass
class L2Report:
    """Squared L2 norm of the (k-1)-fold discrepancy over all of (F_q^d)^(k-1)."""

    k: int
    size: int
    contains_zero: bool
    bound: int
    bruteforce: Fraction | None = None
    closed_form: Fraction | None = None

    @property
    def value(self) -> Fraction:
        v = self.closed_form if self.closed_form is not None else self.bruteforce
        if v is None:
            raise ValueError("report carries no L2 value")
        return v

    @property
    def agree(self) -> bool | None:
        if self.bruteforce is None or self.closed_form is None:
            return None
        return self.bruteforce == self.closed_form

    @property
    def bound_satisfied(self) -> bool:
        return self.value <= self.bound

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "size": self.size,
            "contains_zero": self.contains_zero,
            "bruteforce": _frac(self.bruteforce),
            "closed_form": _frac(self.closed_form),
            "agree": self.agree,
            "bound": self.bound,
            "bound_satisfied": self.bound_satisfied,
        }


def lemma_bound(E: PointSet, k: int) -> int:
    return 2 * len(E) * E.q ** ((E.d - 1) * (k - 1))


def _new_report(E: PointSet, k: int) -> L2Report:
    if k < 2:
        raise ValueError(f"L2 norm of r_(k-1) needs k >= 2, got {k}")
    return L2Report(k, len(E), E.contains_zero(), lemma_bound(E, k))


def l2_bruteforce(E: PointSet, k: int, budget: int = DEFAULT_TUPLE_BUDGET) -> L2Report:
    """Sum of r_{k-1}^2 over every tuple in (F_q^d)^(k-1), evaluated tuple by tuple.

    Tuples are walked over their first k-2 coordinates; the last coordinate is
    handled as one matrix-vector product against the weight matrix.
    """
    report = _new_report(E, k)
    q, d = E.q, E.d
    j = k - 1
    if q ** (d * j) > budget:
        raise BudgetExceeded(f"q^(d(k-1)) = {q ** (d * j)} tuples exceeds budget {budget}")
    if len(E) == 0:
        report.bruteforce = Fraction(0)
        return report
    # W[x, y] = q [x . y = 0] - 1 for x over all of F_q^d and y in E
    W = q * orthogonality_matrix(E.field, all_coords(E.field, d), E.coords).astype(np.int64) - 1
    N = len(W)
    total = 0
    for prefix in itertools.product(range(N), repeat=j - 1):
        weights = np.ones(len(E), dtype=np.int64)
        for x in prefix:
            weights = weights * W[x]
        S = W @ weights
        total += int((S * S).sum())
    report.bruteforce = Fraction(total, q ** (2 * j))
    return report


def dilation_multiplicity(E: PointSet, x: FVector) -> int:
    """Number of nonzero scalars a with a*x in E."""
    return sum(1 for a in range(1, E.q) if x.scale(a) in E)


def l2_closed_form(E: PointSet, k: int) -> L2Report:
    """Exact L2 value from dilation multiplicities along lines through the origin.

    For nonzero y, y' the inner sum over x of w(x, y) w(x, y') is q^d (q-1) when
    y' is a nonzero multiple of y and 0 otherwise; both zero gives q^d (q-1)^2.
    Hence the value q^((d-2)(k-1)) [(q-1)^(k-1) sum_{x != 0} m(x) + [0 in E] (q-1)^(2(k-1))].
    """
    report = _new_report(E, k)
    q, d = E.q, E.d
    j = k - 1
    mult = sum(dilation_multiplicity(E, x) for x in E if not x.is_zero())
    inner = (q - 1) ** j * mult
    if E.contains_zero():
        inner += (q - 1) ** (2 * j)
    report.closed_form = Fraction(q) ** ((d - 2) * j) * inner
    return report


def l2_report(E: PointSet, k: int, budget: int = DEFAULT_TUPLE_BUDGET) -> L2Report:
    report = l2_closed_form(E, k)
    report.bruteforce = l2_bruteforce(E, k, budget).bruteforce
    return report


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    lhs: Fraction
    rhs: int
    contains_zero: bool

    @property
    def ratio(self) -> Fraction | None:
        return None if self.rhs == 0 else self.lhs / self.rhs

    def to_json(self) -> dict:
        r = self.ratio
        return {
            "holds": self.holds,
            "l2_squared": _frac(self.lhs),
            "bound": self.rhs,
            "ratio_decimal": None if r is None else f"{float(r):.12g}",
            "contains_zero": self.contains_zero,
        }


def lemma_bound_check(E: PointSet, k: int) -> BoundCheck:
    """Compare ||r_{k-1}||^2 with 2 |E| q^((d-1)(k-1))."""
    report = l2_closed_form(E, k)
    return BoundCheck(report.value <= report.bound, report.value, report.bound, report.contains_zero)
