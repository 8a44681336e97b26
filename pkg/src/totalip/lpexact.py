"""Exact rational feasibility LP: find alpha with A alpha = b and alpha >= lower.

Phase-1 simplex over ``Fraction`` with Bland's rule, so it always terminates
and returns the same vertex for the same problem.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import DimensionError


@dataclass(frozen=True)
class LPFeasibilityProblem:
    A: tuple
    b: tuple
    lower: tuple

    def __post_init__(self):
        n = len(self.A[0]) if self.A else len(self.lower)
        if any(len(row) != n for row in self.A):
            raise DimensionError("matrix rows have different lengths")
        if len(self.b) != len(self.A):
            raise DimensionError("b does not match the number of rows")
        if len(self.lower) != n:
            raise DimensionError("need one lower bound per variable")


def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Find x >= 0 with A x = b (b >= 0 assumed), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    # tableau rows: [A | I | b]; artificial columns n..n+m-1
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = list(range(n, n + m))
    width = n + m + 1
    # reduced costs of  min sum(artificials)
    cost = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            cost[j] -= T[i][j]
        cost[-1] -= T[i][-1]
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # cannot happen: phase-1 objective is bounded below by 0
            raise ArithmeticError("unbounded phase-1 problem")
        piv_row = T[leave]
        p = piv_row[enter]
        if p != 1:
            piv_row = T[leave] = [v / p for v in piv_row]
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    row = T[i]
                    T[i] = [x - f * y for x, y in zip(row, piv_row)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, piv_row)]
        basis[leave] = enter
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    return x


def feasible_point(p: LPFeasibilityProblem) -> Optional[list[Fraction]]:
    """A basic feasible alpha with ``A alpha == b`` and ``alpha >= lower``, or None."""
    n = len(p.lower)
    if not p.A:
        return [Fraction(v) for v in p.lower]
    shifted = [bi - sum(a * l for a, l in zip(row, p.lower)) for row, bi in zip(p.A, p.b)]
    A = []
    rhs = []
    for row, bi in zip(p.A, shifted):
        s = -1 if bi < 0 else 1
        A.append([Fraction(s * a) for a in row])
        rhs.append(Fraction(s * bi))
    x = _phase_one(A, rhs)
    if x is None:
        return None
    alpha = [xi + l for xi, l in zip(x, p.lower)]
    # exactness guard; a failure here is a bug, not an infeasibility
    for row, bi in zip(p.A, p.b):
        assert sum(a * v for a, v in zip(row, alpha)) == bi
    assert len(alpha) == n
    return alpha
