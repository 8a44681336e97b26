"""Total-regime Unbounded Subset Sum.

When ``b * (i - 1) >= a_i**2`` for every ``k < i <= n`` (and the gcd of the
weights divides ``b``), the solver peels off the largest weight: with
``d = gcd(a_1 .. a_{n-1})`` it fixes ``x_n`` as the residue that makes
``b - x_n a_n`` divisible by ``d`` and divides everything by ``d``. The
reduced instance stays in the regime, so the loop runs down to ``k`` items,
which are handed to an exact fallback.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .core import (
    BudgetExceeded,
    InvariantViolation,
    PreconditionError,
    Solution,
    USSInstance,
    content_gcd,
    verified,
)
from .modular import mod_inverse

log = logging.getLogger(__name__)

#: residue-table fallback is used up to this smallest weight
RESIDUE_TABLE_LIMIT = 10**6
#: elementary steps allowed to the branch-and-bound fallback
DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class RegimeReport:
    k_min: Optional[int]
    gcd_divides: bool
    erdos_graham: bool


def _check_k(k: int) -> None:
    if k < 1:
        raise PreconditionError(
            "k must be >= 1: the bound a_i^2/(i-1) is undefined at i = 1; use k=1"
        )


def check_regime(inst: USSInstance, k: int = 1) -> bool:
    """True iff gcd(a) divides b and ``b (i-1) >= a_i^2`` for all ``k < i <= n``."""
    _check_k(k)
    if inst.b % content_gcd(inst.a):
        return False
    b = inst.b
    return all(b * (i - 1) >= inst.a[i - 1] ** 2 for i in range(k + 1, inst.n + 1))


def regime_report(inst: USSInstance) -> RegimeReport:
    divides = inst.b % content_gcd(inst.a) == 0
    k_min = None
    if divides:
        # the smallest k is one past the last index that violates its bound
        k_min = 1
        for i in range(2, inst.n + 1):
            if inst.b * (i - 1) < inst.a[i - 1] ** 2:
                k_min = i
    return RegimeReport(k_min=k_min, gcd_divides=divides, erdos_graham=erdos_graham_holds(inst))


def erdos_graham_holds(inst: USSInstance) -> bool:
    """gcd(a) | b and ``b (n-1) >= a_n^2``; for one weight, just ``a_1 | b``."""
    if inst.b % content_gcd(inst.a):
        return False
    if inst.n == 1:
        return True
    return inst.b * (inst.n - 1) >= inst.a[-1] ** 2


def sylvester_frobenius(a1: int, a2: int) -> int:
    """Largest target not representable by two coprime coins."""
    if not 1 < a1 < a2:
        raise PreconditionError("need 1 < a1 < a2")
    if gcd(a1, a2) != 1:
        raise PreconditionError(f"gcd({a1}, {a2}) != 1: Frobenius number undefined")
    return a1 * a2 - a1 - a2


def solve_uss(
    inst: USSInstance, k: int = 1, *, budget: int = DEFAULT_BUDGET, check: bool = True
) -> Solution:
    """Find ``x >= 0`` with ``sum(a_i x_i) == b`` for an instance in the k-regime.

    With ``check=False`` the regime test is skipped and the same peeling is
    attempted on any instance; it then raises PreconditionError when a step
    goes negative or the fallback finds nothing, instead of signalling an
    internal error.
    """
    _check_k(k)
    if check and not check_regime(inst, k):
        raise PreconditionError(f"instance is outside the k={k} regime")
    if inst.b % content_gcd(inst.a):
        raise PreconditionError("gcd of the weights does not divide b")
    g = content_gcd(inst.a)
    a = [v // g for v in inst.a]
    b = inst.b // g
    n = len(a)
    x = [0] * n
    base = max(k, 1)
    while n > base:
        d = content_gcd(a[: n - 1])
        an = a[n - 1]
        if d == 1:
            xn = 0
        else:
            inv = mod_inverse(an, d)
            if inv is None:
                raise InvariantViolation("gcd(a_n, d) != 1 after normalization", a=a[:n], d=d)
            xn = (b % d) * inv % d
        x[n - 1] = xn
        rest = b - xn * an
        if rest < 0 and not check:
            raise PreconditionError("peeling went negative outside the regime")
        if rest < 0 or rest % d:
            raise InvariantViolation("peeling step left an invalid remainder", a=a[:n], b=b, xn=xn)
        a = [v // d for v in a[: n - 1]]
        b = rest // d
        n -= 1
        if check and not all(b * (i - 1) >= a[i - 1] ** 2 for i in range(k + 1, n + 1)):
            raise InvariantViolation("reduced instance left the regime", a=a, b=b, k=k)
    head = fallback_solve(USSInstance(tuple(a), b), budget=budget)
    if head is None and not check:
        raise PreconditionError("outside the regime and the remaining items have no solution")
    if head is None:
        raise InvariantViolation("fallback found no solution for a regime-valid instance", a=a, b=b)
    x[:n] = head.x
    return verified(inst, x)


def _residue_table(a: tuple) -> tuple[list, list]:
    """Least representable value in each residue class mod a[0], plus the last weight used.

    Round-robin relaxation: each added weight walks every cycle of
    ``r -> r + w (mod a[0])`` once, starting from the cycle's minimum.
    """
    a1 = a[0]
    dist: list = [None] * a1
    via: list = [-1] * a1
    dist[0] = 0
    for j in range(1, len(a)):
        w = a[j]
        step = w % a1
        if step == 0:
            continue
        cycles = gcd(a1, step)
        for start in range(cycles):
            best = None
            r = start
            for _ in range(a1 // cycles):
                if dist[r] is not None and (best is None or dist[r] < dist[best]):
                    best = r
                r = (r + step) % a1
            if best is None:
                continue
            r = best
            for _ in range(a1 // cycles):
                nxt = (r + step) % a1
                cand = dist[r] + w
                if dist[nxt] is None or cand < dist[nxt]:
                    dist[nxt] = cand
                    via[nxt] = j
                r = nxt
    return dist, via


def _fallback_table(inst: USSInstance) -> Optional[Solution]:
    a, b = inst.a, inst.b
    dist, via = _residue_table(a)
    r = b % a[0]
    if dist[r] is None or dist[r] > b:
        return None
    x = [0] * len(a)
    total = 0
    # dist strictly decreases along via links, so this walk ends at residue 0
    while r:
        j = via[r]
        x[j] += 1
        total += a[j]
        r = (r - a[j]) % a[0]
    x[0] = (b - total) // a[0]
    return verified(inst, x)


def _fallback_bnb(inst: USSInstance, budget: int) -> Optional[Solution]:
    """Depth-first search from the largest weight, counting every node and candidate."""
    a, b = inst.a, inst.b
    n = len(a)
    x = [0] * n
    steps = 0

    def rec(i: int, rem: int) -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"branch-and-bound fallback exceeded {budget} steps")
        if i == 0:
            if rem % a[0] == 0:
                x[0] = rem // a[0]
                return True
            return False
        g = content_gcd(a[:i])
        for c in range(rem // a[i], -1, -1):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"branch-and-bound fallback exceeded {budget} steps")
            r = rem - c * a[i]
            if r % g:
                continue
            x[i] = c
            if rec(i - 1, r):
                return True
        x[i] = 0
        return False

    if rec(n - 1, b):
        return verified(inst, x)
    return None


def fallback_solve(inst: USSInstance, *, budget: int = DEFAULT_BUDGET) -> Optional[Solution]:
    """Exact decision with witness for small instances; None means no solution exists.

    Uses a residue table modulo the smallest weight when that weight is at
    most ``RESIDUE_TABLE_LIMIT``, otherwise a budgeted depth-first search.
    """
    if inst.b % content_gcd(inst.a):
        return None
    if inst.n == 1:
        return verified(inst, [inst.b // inst.a[0]])
    if inst.a[0] <= RESIDUE_TABLE_LIMIT:
        if inst.a[0] * inst.n > budget:
            raise BudgetExceeded(f"residue table needs {inst.a[0] * inst.n} steps > {budget}")
        return _fallback_table(inst)
    return _fallback_bnb(inst, budget)
