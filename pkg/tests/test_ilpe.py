from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import deep_ilpe, independent_head
from totalip.core import (
    BudgetExceeded,
    HILPInstance,
    ILPEInstance,
    ILPInstance,
    PreconditionError,
    Status,
    verify_solution,
)
from totalip.hardness import intro_counterexample
from totalip.ilpe import (
    beta_chain,
    compute_profile,
    finish_beta_head,
    hilp_to_ilpe,
    hilp_volume_bound,
    ilp_to_ilpe,
    lift_hilp,
    permute_columns_search,
    reduce_rank,
    solve_hilp,
    solve_ilp,
    solve_ilpe_total,
)
from totalip.lattice import volume_chain
from totalip.oracle import SearchBudget, brute_intcone, cone_contains


def test_profile_examples():
    p = compute_profile(ILPEInstance(((1, 0, 1), (0, 1, 1)), (0, 0)))
    assert (p.V, p.Delta, p.M) == (1, 2, 2)
    p = compute_profile(ILPEInstance(((3, 0), (0, 3)), (0, 0)))
    assert (p.V, p.Delta, p.M) == (3, 3, 0)
    with pytest.raises(PreconditionError):
        compute_profile(ILPEInstance(((0, 1, 1), (0, 1, 2)), (0, 0)))


def test_solve_examples():
    r = solve_ilpe_total(ILPEInstance(((1, 0, 1), (0, 1, 1)), (5, 5)))
    assert r.solved and verify_solution(ILPEInstance(((1, 0, 1), (0, 1, 1)), (5, 5)), r.solution.x)
    assert solve_ilpe_total(ILPEInstance(((1, 0), (0, 1)), (2, 3))).solution.x == (2, 3)
    for M in (1, 10, 100):
        assert solve_ilpe_total(intro_counterexample(M)).status is Status.NOT_IN_REGIME


def test_square_outcomes():
    assert solve_ilpe_total(ILPEInstance(((2, 0), (0, 2)), (3, 2))).status is Status.NOT_IN_LATTICE
    assert solve_ilpe_total(ILPEInstance(((1, 0), (0, 1)), (-1, 2))).status is Status.INFEASIBLE


def test_not_in_lattice():
    r = solve_ilpe_total(ILPEInstance(((2, 4, 6),), (1001,)))
    assert r.status is Status.NOT_IN_LATTICE


def test_beta_examples():
    A = ((2, 0, 1), (0, 2, 1))
    assert beta_chain(A, (1, 1), volume_chain(A)) == (1,)
    assert beta_chain(A, (2, 4), volume_chain(A)) == (0,)
    A = ((3, 0, 1), (0, 3, 1))
    assert beta_chain(A, (2, 2), volume_chain(A)) == (2,)
    assert finish_beta_head(((1, 0, 5), (0, 1, 5)), (0, 0)) == (0, 0)
    assert finish_beta_head(((1, 0, 5), (0, 1, 5)), (-1, 4)) == (-1, 4)
    assert finish_beta_head(((2, 1, 5), (0, 1, 5)), (4, 2)) == (1, 2)


def test_reduce_rank_examples():
    assert reduce_rank(ILPEInstance(((1, 2), (2, 4)), (3, 6))) == ILPEInstance(((1, 2),), (3,))
    assert reduce_rank(ILPEInstance(((1, 2), (2, 4)), (3, 7))) is None
    full = ILPEInstance(((1, 0), (0, 1)), (3, 3))
    assert reduce_rank(full) is full
    assert solve_ilpe_total(ILPEInstance(((1, 2), (2, 4)), (3, 7))).status is Status.INFEASIBLE


def test_permutation_examples():
    inst = ILPEInstance(((1, 0, 1, 2), (0, 1, 1, 3)), (100, 100))
    assert permute_columns_search(inst) == (0, 1, 2, 3)
    assert permute_columns_search(intro_counterexample(100)) is None
    zero_first = ILPEInstance(((0, 1, 0, 1), (0, 0, 1, 1)), (50, 50))
    perm = permute_columns_search(zero_first)
    assert perm is not None and 0 not in perm[:2]
    r = solve_ilpe_total(zero_first)
    assert r.solved and verify_solution(zero_first, r.solution.x)
    with pytest.raises(BudgetExceeded):
        permute_columns_search(zero_first, max_combinations=2)


def test_reduction_examples():
    red = ilp_to_ilpe(((2,),), (5,))
    assert red.instance == ILPEInstance(((1, 2),), (5,))
    red = ilp_to_ilpe(((1, 0), (0, 1)), (3, 4))
    assert red.instance.A == ((1, 0, 1, 0), (0, 1, 0, 1))
    assert red.project((1, 0, 2, 4)) == (2, 4) and red.slack((1, 0, 2, 4)) == (1, 0)
    h = HILPInstance(((1,),), (4,), ((2,),), (6,))
    assert hilp_to_ilpe(h).instance == ILPEInstance(((1, 1), (0, 2)), (4, 6))
    empty = HILPInstance((), (), ((1, 1),), (3,), n=2)
    assert hilp_to_ilpe(empty).instance == ILPEInstance(((1, 1),), (3,))
    assert lift_hilp(h, (3,)) == (1, 3)
    assert hilp_volume_bound(5, 2) == 25


def test_ilp_and_hilp_solutions_are_original():
    ilp = ILPInstance(((1, 1), (1, -1)), (100, 50))
    r = solve_ilp(ilp)
    assert r.solved and verify_solution(ilp, r.solution.x)
    h = HILPInstance(((1, 1, 0),), (500,), ((1, 0, 1),), (400,))
    r = solve_hilp(h)
    assert r.solved and verify_solution(h, r.solution.x)


@pytest.mark.parametrize("seed", range(4))
def test_deep_instances_solve_with_beta_windows(seed):
    rng = Random(seed)
    for _ in range(25):
        inst, M = deep_ilpe(rng, d_max=3, n_max=6, bound=6)
        r = solve_ilpe_total(inst, search=False)
        assert r.solved and verify_solution(inst, r.solution.x)
        for k, beta in enumerate(r.trace.betas, start=inst.d + 1):
            assert 0 <= beta < r.trace.volumes.V(k - 1)
        assert all(h >= -M for h in r.trace.head)


@given(st.integers(0, 10**6), st.permutations(range(4)))
def test_permutation_invariance(seed, perm):
    rng = Random(seed)
    inst, _ = deep_ilpe(rng, d_max=2, n_max=4, bound=5)
    n = inst.n
    perm = [p for p in perm if p < n]
    shuffled = ILPEInstance(tuple(tuple(row[j] for j in perm) for row in inst.A), inst.b)
    r = solve_ilpe_total(shuffled)
    assert r.solved and verify_solution(shuffled, r.solution.x)


@given(st.integers(0, 10**6))
def test_oracle_agreement_small(seed):
    rng = Random(seed)
    d = rng.randint(1, 2)
    n = rng.randint(d, 3)
    A = tuple(tuple(rng.randint(0, 4) for _ in range(n)) for _ in range(d))
    b = tuple(rng.randint(0, 60) for _ in range(d))
    inst = ILPEInstance(A, b)
    r = solve_ilpe_total(inst)
    brute = brute_intcone(inst, SearchBudget(max_coordinate=200))
    if r.solved:
        assert verify_solution(inst, r.solution.x)
        assert brute.__class__.__name__ == "Solution"
    elif r.status is Status.INFEASIBLE:
        assert brute.__class__.__name__ == "NoSolutionInBox"
    if r.status is Status.NOT_IN_LATTICE:
        assert brute.__class__.__name__ == "NoSolutionInBox"


@given(st.integers(0, 10**6))
def test_not_in_regime_only_without_certified_lp(seed):
    rng = Random(seed)
    A = independent_head(rng, 2, 3, 4)
    b = tuple(rng.randint(-30, 30) for _ in range(2))
    inst = ILPEInstance(A, b)
    r = solve_ilpe_total(inst, search=False)
    if r.status is Status.NOT_IN_REGIME:
        M = compute_profile(inst).M
        shifted = [bi - M * (row[0] + row[1]) for row, bi in zip(A, b)]
        assert not cone_contains(A, shifted)
