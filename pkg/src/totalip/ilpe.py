"""Total-regime solver for integer programs with equality constraints.

Given ``A x = b`` whose leading d columns are independent, an exact LP finds
a rational point alpha with alpha_i >= M on the leading coordinates
(M = (n-d) V Delta). Rounding alpha down leaves a small lattice vector w;
peeling w down the prefix lattices L(a_1..a_k) with congruences fixes
beta_n .. beta_{d+1} in [0, V_{k-1}), and the leading block absorbs the
rest with beta_i >= -M, so floor(alpha) + beta is non-negative.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .core import (
    BudgetExceeded,
    HILPInstance,
    ILPEInstance,
    ILPInstance,
    InvariantViolation,
    PreconditionError,
    Solution,
    Status,
    mat_vec,
    verified,
    verify_solution,
)
from .lattice import (
    NonIntegral,
    VolumeChain,
    adjugate_det,
    bareiss_det,
    ceil_sqrt,
    gram_det,
    hnf_basis,
    in_lattice,
    independent_rows,
    rational_combination,
    solve_integral,
    volume_chain,
)
from .lpexact import LPFeasibilityProblem, feasible_point
from .modular import crt_general, solve_scaled_congruence

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10**5


@dataclass(frozen=True)
class VBoundedProfile:
    V: int
    Delta: int
    M: int

    def coarse_threshold(self, n: int, d: int) -> int:
        """(n - d) * Delta**d, the profile-free lower bound on the leading alphas."""
        return (n - d) * self.Delta**d


@dataclass
class SolveTrace:
    """Intermediate values of one pipeline run, kept for checks and diagnostics."""

    profile: Optional[VBoundedProfile] = None
    alpha: Optional[list] = None
    floors: Optional[list] = None
    w: Optional[tuple] = None
    volumes: Optional[VolumeChain] = None
    betas: tuple = ()
    head: tuple = ()
    permutation: Optional[tuple] = None


@dataclass
class IlpeResult:
    status: Status
    solution: Optional[Solution] = None
    reason: str = ""
    trace: SolveTrace = field(default_factory=SolveTrace)

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


def _cols(A) -> list[tuple]:
    return [tuple(row[j] for row in A) for j in range(len(A[0]))]


def _head_independent(A, d: int) -> bool:
    if len(A[0]) < d:
        return False
    return bareiss_det([row[:d] for row in A]) != 0


def _profile_for(cols: list[tuple], head: Sequence[int], n: int) -> VBoundedProfile:
    d = len(head)
    delta = max(ceil_sqrt(sum(v * v for v in c)) for c in cols)
    V = max(
        ceil_sqrt(gram_det([cols[i] for i in sub])) for sub in combinations(head, d - 1)
    )
    return VBoundedProfile(V=V, Delta=delta, M=(n - d) * V * delta)


def compute_profile(inst: ILPEInstance) -> VBoundedProfile:
    """V, Delta and M = (n-d) V Delta for the column order as given."""
    if not _head_independent(inst.A, inst.d):
        raise PreconditionError(
            "the first d columns are not linearly independent; "
            "permute columns (permute_columns_search) or reduce rank first"
        )
    return _profile_for(_cols(inst.A), range(inst.d), inst.n)


def beta_chain(A, w: Sequence[int], volumes: VolumeChain) -> tuple[int, ...]:
    """beta_{d+1} .. beta_n with ``w - sum(beta_j a_j)`` in L(a_1..a_d).

    Each beta_k lies in ``[0, V_{k-1})``.
    """
    d = len(A)
    cols = _cols(A)
    n = len(cols)
    betas = [0] * (n - d)
    w_cur = list(w)
    for k in range(n, d, -1):
        # 1-based index k; prefix lattice L(a_1 .. a_{k-1})
        basis = hnf_basis(cols[: k - 1])
        Vk = volumes.V(k - 1)
        if basis.det != Vk:
            raise InvariantViolation("basis determinant disagrees with the volume chain", k=k)
        if in_lattice(basis, w_cur) is not None:
            continue
        adj, det = adjugate_det(basis.matrix)
        m = abs(det)
        ak = cols[k - 1]
        xs = [sum(a * v for a, v in zip(row, w_cur)) for row in adj]
        ys = [sum(a * v for a, v in zip(row, ak)) for row in adj]
        system = []
        for x, y in zip(xs, ys):
            c = solve_scaled_congruence(x % m, y % m, m)
            if c is None:
                raise InvariantViolation("congruence has no solution: w is not in the lattice", k=k)
            system.append(c)
        gamma = crt_general(system)
        if gamma is None:
            raise InvariantViolation("congruence system is inconsistent", k=k)
        beta = gamma.residue % Vk
        w_cur = [x - beta * y for x, y in zip(w_cur, ak)]
        if in_lattice(basis, w_cur) is None:
            raise InvariantViolation("remainder left the prefix lattice", k=k, beta=beta)
        betas[k - d - 1] = beta
    return tuple(betas)


def finish_beta_head(A, w_star: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of ``w_star`` over the leading d columns (must be integral)."""
    d = len(A)
    return solve_integral([row[:d] for row in A], w_star)


def _solve_square(inst: ILPEInstance, trace: SolveTrace) -> IlpeResult:
    trace.profile = _profile_for(_cols(inst.A), range(inst.d), inst.n)
    adj, det = adjugate_det(inst.A)
    alpha = [Fraction(sum(a * v for a, v in zip(row, inst.b)), det) for row in adj]
    trace.alpha = alpha
    if any(a < 0 for a in alpha):
        return IlpeResult(Status.INFEASIBLE, reason="unique real solution has a negative entry", trace=trace)
    try:
        x = solve_integral(inst.A, inst.b)
    except NonIntegral:
        return IlpeResult(Status.NOT_IN_LATTICE, reason="b is not in the lattice of A", trace=trace)
    trace.head = x
    return IlpeResult(Status.SOLVED, verified(inst, x), trace=trace)


def _solve_ordered(inst: ILPEInstance) -> IlpeResult:
    """The pipeline for a column order whose leading d columns are independent."""
    trace = SolveTrace()
    d, n = inst.d, inst.n
    if n == d:
        return _solve_square(inst, trace)
    prof = compute_profile(inst)
    trace.profile = prof
    lower = (prof.M,) * d + (0,) * (n - d)
    alpha = feasible_point(LPFeasibilityProblem(inst.A, inst.b, lower))
    if alpha is None:
        return IlpeResult(
            Status.NOT_IN_REGIME,
            reason=f"no rational point with the leading coordinates >= M = {prof.M}",
            trace=trace,
        )
    trace.alpha = alpha
    cols = _cols(inst.A)
    if in_lattice(hnf_basis(cols), inst.b) is None:
        return IlpeResult(Status.NOT_IN_LATTICE, reason="b is not in the lattice of A", trace=trace)
    floors = [a.numerator // a.denominator for a in alpha]
    trace.floors = floors
    v = mat_vec(inst.A, floors)
    w = tuple(bi - vi for bi, vi in zip(inst.b, v))
    trace.w = w
    volumes = volume_chain(inst.A)
    trace.volumes = volumes
    betas = beta_chain(inst.A, w, volumes)
    trace.betas = betas
    w_star = [wi - sum(bj * c[i] for bj, c in zip(betas, cols[d:])) for i, wi in enumerate(w)]
    try:
        head = finish_beta_head(inst.A, w_star)
    except NonIntegral as exc:
        raise InvariantViolation(str(exc), alpha=alpha, betas=betas, volumes=volumes) from None
    trace.head = head
    if any(h < -prof.M for h in head):
        raise InvariantViolation("head coefficient below -M", alpha=alpha, betas=betas, head=head, M=prof.M)
    x = [f + bt for f, bt in zip(floors, head + betas)]
    if any(v < 0 for v in x) or not verify_solution(inst, x):
        raise InvariantViolation("assembled vector is not a solution", x=x, alpha=alpha, betas=betas)
    return IlpeResult(Status.SOLVED, Solution(tuple(x), True), trace=trace)


def reduce_rank(inst: ILPEInstance) -> Optional[ILPEInstance]:
    """Keep a maximal independent set of rows; None if the dropped rows contradict b."""
    keep = independent_rows(inst.A)
    if len(keep) == inst.d:
        return inst
    if not keep:
        # A == 0: consistent only for b == 0, and then every x works
        if any(inst.b):
            return None
        return ILPEInstance(((0,) * inst.n,), (0,))
    kept_rows = [inst.A[i] for i in keep]
    kept_b = [inst.b[i] for i in keep]
    for i in range(inst.d):
        if i in keep:
            continue
        coef = rational_combination(kept_rows, inst.A[i])
        if sum(c * bv for c, bv in zip(coef, kept_b)) != inst.b[i]:
            return None
    return ILPEInstance(tuple(kept_rows), tuple(kept_b))


def permute_columns_search(
    inst: ILPEInstance, *, max_combinations: int = DEFAULT_SEARCH_BUDGET
) -> Optional[tuple[int, ...]]:
    """A column order whose leading d columns certify totality, or None.

    Tries every d-subset of columns in lexicographic order; a subset is
    accepted when it is independent and the LP with lower bounds
    (n-d) V Delta on it is feasible. The returned permutation lists the
    chosen columns first, then the rest in their original order.
    """
    d, n = inst.d, inst.n
    if comb(n, d) > max_combinations:
        raise BudgetExceeded(f"{comb(n, d)} column subsets exceed the budget {max_combinations}")
    cols = _cols(inst.A)
    for head in combinations(range(n), d):
        if bareiss_det([[cols[j][i] for j in head] for i in range(d)]) == 0:
            continue
        prof = _profile_for(cols, head, n)
        lower = tuple(prof.M if j in head else 0 for j in range(n))
        if feasible_point(LPFeasibilityProblem(inst.A, inst.b, lower)) is not None:
            rest = tuple(j for j in range(n) if j not in head)
            return tuple(head) + rest
    return None


def _permuted(inst: ILPEInstance, perm: Sequence[int]) -> ILPEInstance:
    return ILPEInstance(tuple(tuple(row[j] for j in perm) for row in inst.A), inst.b)


def solve_ilpe_total(
    inst: ILPEInstance, *, search: bool = True, max_combinations: int = DEFAULT_SEARCH_BUDGET
) -> IlpeResult:
    """Solve ``A x = b, x >= 0`` if the instance is provably in the total regime.

    Outcomes: SOLVED with a verified solution; NOT_IN_REGIME when no column
    order certifies totality; NOT_IN_LATTICE when b is not an integer
    combination of the columns; INFEASIBLE when the equations themselves
    are inconsistent (or a square system has a negative unique solution).
    """
    reduced = reduce_rank(inst)
    if reduced is None:
        return IlpeResult(Status.INFEASIBLE, reason="equations are inconsistent")
    if not any(any(row) for row in reduced.A):
        return IlpeResult(Status.SOLVED, verified(inst, (0,) * inst.n))
    if _head_independent(reduced.A, reduced.d):
        result = _solve_ordered(reduced)
        if result.status is not Status.NOT_IN_REGIME or not search:
            return _check_back(inst, result)
    elif not search:
        return IlpeResult(Status.NOT_IN_REGIME, reason="leading columns are dependent")
    perm = permute_columns_search(reduced, max_combinations=max_combinations)
    if perm is None:
        return IlpeResult(Status.NOT_IN_REGIME, reason="no column subset certifies totality")
    result = _solve_ordered(_permuted(reduced, perm))
    result.trace.permutation = perm
    if result.solution is not None:
        x = [0] * inst.n
        for pos, j in enumerate(perm):
            x[j] = result.solution.x[pos]
        result.solution = Solution(tuple(x), True)
    return _check_back(inst, result)


def _check_back(inst: ILPEInstance, result: IlpeResult) -> IlpeResult:
    if result.solution is not None:
        result.solution = verified(inst, result.solution.x)
    return result


# -- reductions ---------------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    """An equality-form instance plus the bookkeeping to map solutions back.

    Variables of ``instance`` are ``(slack_1..slack_s, x_1..x_n)``.
    """

    instance: ILPEInstance
    n_slack: int

    def project(self, z: Sequence[int]) -> tuple[int, ...]:
        return tuple(z[self.n_slack:])

    def slack(self, z: Sequence[int]) -> tuple[int, ...]:
        return tuple(z[: self.n_slack])


def ilp_to_ilpe(A, b) -> Reduction:
    """``A x <= b`` becomes ``[I | A] (y, x) = b`` with slacks y >= 0 in front."""
    d = len(A)
    rows = tuple(tuple(int(i == k) for k in range(d)) + tuple(A[i]) for i in range(d))
    return Reduction(ILPEInstance(rows, tuple(b)), d)


def hilp_to_ilpe(inst: HILPInstance) -> Reduction:
    """Block system ``[[I, A1], [0, A2]] (y, x) = (b1, b2)``."""
    d1 = len(inst.A1)
    rows = [tuple(int(i == k) for k in range(d1)) + tuple(inst.A1[i]) for i in range(d1)]
    rows += [(0,) * d1 + tuple(r) for r in inst.A2]
    return Reduction(ILPEInstance(tuple(rows), tuple(inst.b1) + tuple(inst.b2)), d1)


def hilp_volume_bound(Delta: int, d2: int) -> int:
    """Upper bound Delta**d2 on the (d1+d2-1)-subset volumes of the block system's head."""
    return Delta**d2


def lift_hilp(inst: HILPInstance, x: Sequence[int]) -> tuple[int, ...]:
    """Slack-extended vector for the reduced system (slacks may come out negative)."""
    slack = tuple(bi - ai for bi, ai in zip(inst.b1, mat_vec(inst.A1, x)))
    return slack + tuple(x)


def _solve_reduction(original, red: Reduction, **kw) -> IlpeResult:
    result = solve_ilpe_total(red.instance, **kw)
    if result.solution is not None:
        result.solution = verified(original, red.project(result.solution.x))
    return result


def solve_ilp(inst: ILPInstance, **kw) -> IlpeResult:
    return _solve_reduction(inst, ilp_to_ilpe(inst.A, inst.b), **kw)


def solve_hilp(inst: HILPInstance, **kw) -> IlpeResult:
    if not inst.A1 and not inst.A2:
        return IlpeResult(Status.SOLVED, verified(inst, (0,) * inst.n))
    return _solve_reduction(inst, hilp_to_ilpe(inst), **kw)
