"""Brute-force checkers that share no elimination code with the solvers.

Everything here is deliberately naive: reachability bitsets for coin
problems, Gauss-Jordan over ``Fraction`` plus bounded enumeration for
integer cones, and basis enumeration for real cones. Only ``core`` types
are imported.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

from .core import BudgetExceeded, ILPEInstance, PreconditionError, Solution, USSInstance, verified


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 10**7
    max_coordinate: int = 10**6

    def __post_init__(self):
        if self.max_states <= 0 or self.max_coordinate <= 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class NoSolutionInBox:
    """No solution with the searched coordinates; ``absolute`` means the box provably held all."""

    absolute: bool
    reason: str = ""


@dataclass(frozen=True)
class Holds:
    checked: int
    inconclusive: int = 0


@dataclass(frozen=True)
class CounterexamplePoint:
    z: tuple


# -- coin problems -------------------------------------------------------------

def reachable_mask(a: Sequence[int], limit: int) -> int:
    """Bit v is set iff v in [0, limit] is a non-negative combination of ``a``."""
    full = (1 << (limit + 1)) - 1
    mask = 1
    for w in a:
        if w > limit:
            continue
        # closure under +w by doubling: after shifts w, 2w, 4w, ... every multiple is covered
        shift = w
        while shift <= limit:
            mask |= (mask << shift) & full
            shift <<= 1
    return mask


def dp_uss(inst: USSInstance, budget: SearchBudget = DEFAULT_BUDGET) -> Optional[Solution]:
    """Table over 0..b recording the last weight used; None if b is unreachable."""
    a, b = inst.a, inst.b
    if b + 1 > budget.max_states:
        raise BudgetExceeded(f"dp table of size {b + 1} exceeds {budget.max_states}")
    last = [-1] * (b + 1)
    last[0] = len(a)
    for v in range(1, b + 1):
        for j, w in enumerate(a):
            if w > v:
                break
            if last[v - w] >= 0:
                last[v] = j
                break
    if last[b] < 0:
        return None
    x = [0] * len(a)
    v = b
    while v:
        j = last[v]
        x[j] += 1
        v -= a[j]
    return verified(inst, x)


def brute_frobenius(a: Sequence[int], budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Largest non-representable target, by scanning reachability up to a_1 * a_n.

    Returns -1 when every non-negative integer is representable (some a_i = 1).
    """
    a = sorted(set(a))
    g = 0
    for v in a:
        g = gcd(g, v)
    if g != 1:
        raise PreconditionError(f"gcd{tuple(a)} = {g}: Frobenius number undefined")
    limit = a[0] * a[-1]
    if limit + 1 > budget.max_states:
        raise BudgetExceeded(f"scan up to {limit} exceeds {budget.max_states}")
    holes = ~reachable_mask(a, limit) & ((1 << (limit + 1)) - 1)
    return holes.bit_length() - 1


# -- linear algebra over Fraction (kept local on purpose) ------------------------

@dataclass(frozen=True)
class _Elim:
    """Reduced row echelon data for A: ``E A = R`` with E invertible."""

    E: tuple  # rows of the row-operation matrix
    pivots: tuple  # pivot column of each non-zero row of R
    R: tuple  # non-zero rows of R
    zero_rows: tuple  # rows of E whose R row vanished (consistency checks)
    free: tuple


@lru_cache(maxsize=256)
def _eliminate(A: tuple) -> _Elim:
    d, n = len(A), len(A[0])
    M = [[Fraction(v) for v in A[i]] + [Fraction(int(i == k)) for k in range(d)] for i in range(d)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, d) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(d):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [v - f * w for v, w in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = tuple(c for c in range(n) if c not in pivots)
    return _Elim(
        E=tuple(tuple(row[n:]) for row in M[:r]),
        pivots=tuple(pivots),
        R=tuple(tuple(row[:n]) for row in M[:r]),
        zero_rows=tuple(tuple(row[n:]) for row in M[r:]),
        free=free,
    )


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _integer_rows(el: _Elim, rhs: Sequence[Fraction]):
    """Per pivot row: (L, T, S) with ``x_pivot = (T - sum(S_f x_f)) / L`` in integers."""
    out = []
    for row, c in zip(el.R, rhs):
        dens = [c.denominator] + [row[f].denominator for f in el.free]
        L = lcm(*dens)
        out.append((L, int(c * L), [int(row[f] * L) for f in el.free]))
    return out


def _row_bounds(A, b) -> tuple[dict, bool]:
    """Upper bounds on variables from rows whose coefficients share one sign.

    Returns ``(bounds, contradiction)``; contradiction is set when such a row
    cannot be met by any non-negative vector.
    """
    bounds: dict[int, int] = {}
    for row, bi in zip(A, b):
        for s in (1, -1):
            if all(s * v >= 0 for v in row):
                rhs = s * bi
                if rhs < 0:
                    return bounds, True
                for j, v in enumerate(row):
                    if v:
                        cap = rhs // (s * v)
                        bounds[j] = min(bounds.get(j, cap), cap)
    return bounds, False


def brute_intcone(
    inst: ILPEInstance, budget: SearchBudget = DEFAULT_BUDGET
) -> Union[Solution, NoSolutionInBox]:
    """Search for ``x >= 0`` integer with ``A x = b``.

    Pivot variables of the echelon form are determined by the free ones. All
    free variables but the last are enumerated in ``[0, cap]``; the last is
    scanned over the interval where every pivot variable stays non-negative,
    or over one full period of the integrality pattern when that interval is
    unbounded. The verdict is absolute when every enumerated free variable
    has a row-derived cap within ``max_coordinate``.
    """
    A, b = inst.A, inst.b
    el = _eliminate(A)
    if any(_dot(e, b) for e in el.zero_rows):
        return NoSolutionInBox(True, "equations are inconsistent")
    bounds, contradiction = _row_bounds(A, b)
    if contradiction:
        return NoSolutionInBox(True, "a one-signed row cannot be met by x >= 0")
    rhs = [_dot(e, b) for e in el.E]
    rows = _integer_rows(el, rhs)
    free = el.free
    n = inst.n
    if not free:
        x = [0] * n
        for (L, T, _), p in zip(rows, el.pivots):
            if T % L or T < 0:
                return NoSolutionInBox(True, "unique solution is not a non-negative integer")
            x[p] = T // L
        return verified(inst, x)
    outer, last = free[:-1], free[-1]
    caps = []
    absolute = True
    for f in outer:
        cap = bounds.get(f)
        if cap is None or cap > budget.max_coordinate:
            absolute = False
            cap = budget.max_coordinate if cap is None else min(cap, budget.max_coordinate)
        caps.append(cap)
    period = lcm(*(L for L, _, _ in rows)) if rows else 1
    last_cap = bounds.get(last)
    states = 0
    for combo in product(*(range(c + 1) for c in caps)):
        # pivot_i = (T_i - sum_outer S x - S_last * t) / L_i  >= 0
        lo, hi = 0, last_cap
        partial = []
        ok = True
        for L, T, S in rows:
            base = T - sum(s * v for s, v in zip(S[:-1], combo))
            sl = S[-1]
            partial.append(base)
            if sl > 0:
                top = base // sl
                hi = top if hi is None else min(hi, top)
            elif sl < 0:
                # base + |sl| t >= 0  <=>  t >= ceil(-base / |sl|)
                lo = max(lo, -(base // -sl))
            elif base < 0:
                ok = False
        if not ok or (hi is not None and hi < lo):
            states += 1
            if states > budget.max_states:
                raise BudgetExceeded(f"intcone search exceeded {budget.max_states} states")
            continue
        stop = lo + period - 1 if hi is None else hi
        t = lo
        while t <= stop:
            states += 1
            if states > budget.max_states:
                raise BudgetExceeded(f"intcone search exceeded {budget.max_states} states")
            vals = []
            for (L, _, S), base in zip(rows, partial):
                num = base - S[-1] * t
                if num % L or num < 0:
                    break
                vals.append(num // L)
            else:
                x = [0] * n
                for f, v in zip(outer, combo):
                    x[f] = v
                x[last] = t
                for p, v in zip(el.pivots, vals):
                    x[p] = v
                return verified(inst, x)
            t += 1
    if absolute:
        return NoSolutionInBox(True, "outer free coordinates capped by one-signed rows; last one scanned over its whole feasible range")
    return NoSolutionInBox(False, f"searched free coordinates up to {budget.max_coordinate}")


def lattice_contains(A: Sequence[Sequence[int]], z: Sequence[int]) -> bool:
    """Is ``z`` an integer (any sign) combination of A's columns?

    The integrality of pivot variables is periodic in each free variable with
    period lcm of the echelon denominators, so one period per free variable
    decides it.
    """
    A = tuple(tuple(r) for r in A)
    el = _eliminate(A)
    if any(_dot(e, z) for e in el.zero_rows):
        return False
    rows = _integer_rows(el, [_dot(e, z) for e in el.E])
    if not el.free:
        return all(T % L == 0 for L, T, _ in rows)
    period = lcm(*(L for L, _, _ in rows)) if rows else 1
    for combo in product(range(period), repeat=len(el.free)):
        if all((T - sum(s * v for s, v in zip(S, combo))) % L == 0 for L, T, S in rows):
            return True
    return False


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    n = len(M)
    aug = [row[:] + [r] for row, r in zip(M, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[c])]
    return [row[-1] for row in aug]


def cone_contains(A: Sequence[Sequence[int]], z: Sequence) -> bool:
    """Is ``z = A y`` for some real ``y >= 0``? Decided by enumerating bases.

    If a non-negative solution exists, a basic one does (its support can be
    extended to a basis of the row space), so trying every column basis is
    exhaustive.
    """
    A = tuple(tuple(r) for r in A)
    el = _eliminate(A)
    if any(_dot(e, z) for e in el.zero_rows):
        return False
    rhs = [_dot(e, z) for e in el.E]
    r = len(el.R)
    if r == 0:
        return True
    n = len(A[0])
    for cols in combinations(range(n), r):
        y = _solve_square([[row[c] for c in cols] for row in el.R], rhs)
        if y is not None and all(v >= 0 for v in y):
            return True
    return False


def lp_feasible(A, b, lower) -> bool:
    """Is there a real alpha >= lower with A alpha = b? (shift, then cone membership)"""
    shifted = [bi - sum(a * l for a, l in zip(row, lower)) for row, bi in zip(A, b)]
    return cone_contains(A, shifted)


def check_diagonal_property(
    A: Sequence[Sequence[int]],
    t: int,
    budget: SearchBudget = DEFAULT_BUDGET,
    *,
    side: int = 25,
    candidates: Optional[Iterable[Sequence[int]]] = None,
) -> Union[Holds, CounterexamplePoint]:
    """Test that lattice points of ``A {y >= t}`` lie in the integer cone of A.

    By default the integer points within ``side`` (sup-norm) of ``A (t, .., t)``
    are tried; pass ``candidates`` to test specific points instead. Holds is
    relative to the tried points; a CounterexamplePoint is an absolute
    verdict (the intcone search for it was exhaustive).
    """
    A = tuple(tuple(r) for r in A)
    d, n = len(A), len(A[0])
    if any(all(A[i][j] == 0 for i in range(d)) for j in range(n)):
        raise PreconditionError("columns must be non-zero")
    z0 = [t * sum(row) for row in A]
    if candidates is None:
        candidates = (
            tuple(c + o for c, o in zip(z0, off)) for off in product(range(-side, side + 1), repeat=d)
        )
    checked = inconclusive = 0
    for z in candidates:
        z = tuple(z)
        if not cone_contains(A, [zi - ci for zi, ci in zip(z, z0)]):
            continue
        if not lattice_contains(A, z):
            continue
        checked += 1
        if checked > budget.max_states:
            raise BudgetExceeded(f"diagonal check exceeded {budget.max_states} points")
        res = brute_intcone(ILPEInstance(A, z), budget)
        if isinstance(res, Solution):
            continue
        if res.absolute:
            return CounterexamplePoint(z)
        inconclusive += 1
    return Holds(checked, inconclusive)
