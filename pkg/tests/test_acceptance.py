"""End-to-end acceptance criteria. Each test prints one PASS/FAIL line."""
import time
from itertools import combinations, product
from math import gcd, lcm
from random import Random

import pytest

from helpers import deep_ilpe, peeling_tuple, regime_uss
from totalip.core import ILPEInstance, Status, USSInstance, content_gcd, verify_solution
from totalip.hardness import certify_infeasible, gen_lower_bound_instance, intro_counterexample, threshold_cleared
from totalip.ilpe import compute_profile, solve_ilpe_total
from totalip.lattice import adjugate_det, gram_det, hnf_basis, in_lattice
from totalip.modular import Congruence, crt_general, mod_inverse
from totalip.oracle import (
    Holds,
    NoSolutionInBox,
    brute_frobenius,
    brute_intcone,
    check_diagonal_property,
    dp_uss,
    reachable_mask,
)
from totalip.uss import check_regime, solve_uss

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return emit


def test_sylvester_oracle(verdict):
    start = time.perf_counter()
    bad = [
        (a1, a2)
        for a1 in range(2, 26)
        for a2 in range(a1 + 1, 26)
        if gcd(a1, a2) == 1 and brute_frobenius([a1, a2]) != a1 * a2 - a1 - a2
    ]
    elapsed = time.perf_counter() - start
    verdict("1 Sylvester oracle", not bad and elapsed < 10, f"mismatches={bad} time={elapsed:.2f}s")


def test_erdos_graham_totality(verdict):
    start = time.perf_counter()
    failures = []
    triples = 0
    for a1, a2, a3 in combinations(range(1, 41), 3):
        if gcd(gcd(a1, a2), a3) != 1:
            continue
        triples += 1
        lo = -(-a3 * a3 // 2)
        # a1 consecutive representable targets from lo on cover every larger b by adding a1
        mask = reachable_mask((a1, a2, a3), lo + a1)
        missing = [b for b in range(lo, lo + a1) if not mask >> b & 1]
        for b in (lo, lo + a1 - 1):
            if dp_uss(USSInstance((a1, a2, a3), b)) is None:
                missing.append(b)
        if missing:
            failures.append(((a1, a2, a3), missing))
    elapsed = time.perf_counter() - start
    verdict(
        "2 Erdos-Graham totality",
        not failures and elapsed < 60,
        f"triples={triples} failures={failures[:3]} time={elapsed:.2f}s",
    )


def test_uss_solver_correctness(verdict):
    rng = Random(2024)
    failures = confirmed = 0
    for i in range(1000):
        inst = regime_uss(rng, n_max=8, a_max=200, b_extra=rng.choice([10, 10**4, 10**6, 10**12]))
        ok = check_regime(inst)
        if ok:
            sol = solve_uss(inst)
            ok = sol.verified and verify_solution(inst, sol.x)
        if ok and inst.b <= 10**6:
            ok = bool(reachable_mask(inst.a, inst.b) >> inst.b & 1)
            confirmed += 1
        failures += not ok
    verdict("3 USS solver correctness", failures == 0, f"failures={failures} dp_confirmed={confirmed}")


def test_peeling_inequality(verdict):
    rng = Random(7)
    failures = 0
    for _ in range(10**4):
        a, b, d = peeling_tuple(rng)
        n = len(a)
        assert content_gcd(a[:-1]) % d == 0 and gcd(a[-1], d) == 1 and b * (n - 1) >= a[-1] ** 2
        r = b * mod_inverse(a[-1], d) % d
        failures += not d * (b - a[-1] * r) > b
    verdict("4 peeling inequality", failures == 0, f"failures={failures} of 10000")


def test_ilpe_pipeline(verdict):
    rng = Random(11)
    start = time.perf_counter()
    failures = []
    for i in range(500):
        inst, M = deep_ilpe(rng, d_max=4, n_max=8, bound=10)
        r = solve_ilpe_total(inst)
        ok = r.solved and verify_solution(inst, r.solution.x) and min(r.solution.x) >= 0
        if ok and r.trace.volumes is not None:
            ok = all(
                0 <= beta < r.trace.volumes.V(k - 1)
                for k, beta in enumerate(r.trace.betas, start=inst.d + 1)
            )
        if not ok:
            failures.append((i, inst, r.status))
    elapsed = time.perf_counter() - start
    verdict(
        "5 ILPE pipeline",
        not failures and elapsed < 120,
        f"failures={len(failures)} time={elapsed:.2f}s",
    )


def test_lower_bound_instance_d2(verdict):
    start = time.perf_counter()
    g = gen_lower_bound_instance(2)
    checks = {
        "parameters": (g.primes, g.p_last, g.P, g.Delta) == ((19, 17), 13, 323, 19),
        "A alpha = b": all(
            sum(a * v for a, v in zip(row, g.alpha)) == bi for row, bi in zip(g.A, g.b)
        ),
        "threshold": all(threshold_cleared(a, g.Delta, 2) for a in g.alpha),
        "certificate": certify_infeasible(g.instance).residual < 0,
    }
    res = brute_intcone(g.instance)
    checks["brute"] = isinstance(res, NoSolutionInBox) and res.absolute
    elapsed = time.perf_counter() - start
    verdict(
        "6 d=2 lower-bound instance",
        all(checks.values()) and elapsed < 30,
        f"{checks} time={elapsed:.2f}s",
    )


def test_intro_counterexample(verdict):
    outcomes = {}
    for M in (1, 10, 100):
        inst = intro_counterexample(M)
        res = brute_intcone(inst)
        status = solve_ilpe_total(inst).status
        outcomes[M] = (isinstance(res, NoSolutionInBox) and res.absolute, status.value)
    ok = all(b and s == Status.NOT_IN_REGIME.value for b, s in outcomes.values())
    verdict("7 intro counter-example", ok, str(outcomes))


def _combo(cols, z):
    return tuple(sum(c[i] * v for c, v in zip(cols, z)) for i in range(len(cols[0])))


def test_lattice_layer(verdict):
    rng = Random(8)
    fails = {"inclusion": 0, "gram": 0, "adjugate": 0}
    for _ in range(500):
        d = rng.randint(1, 4)
        k = rng.randint(1, 6)
        gens = [tuple(rng.randint(-8, 8) for _ in range(d)) for _ in range(k)]
        if not any(any(g) for g in gens):
            gens[0] = (1,) + (0,) * (d - 1)
        B = hnf_basis(gens)
        ok = all(_combo(gens, t) == c for c, t in zip(B.columns, B.transform))
        ok = ok and all(
            (z := in_lattice(B, g)) is not None and _combo(B.columns, z) == g for g in gens
        )
        fails["inclusion"] += not ok
        cols = [list(c) for c in B.columns]
        before = gram_det(cols)
        for _ in range(5):
            if len(cols) < 2:
                break
            i, j = rng.sample(range(len(cols)), 2)
            m = rng.randint(-3, 3)
            cols[i] = [x + m * y for x, y in zip(cols[i], cols[j])]
        fails["gram"] += gram_det(cols) != before
    for _ in range(500):
        d = rng.randint(1, 5)
        M = [[rng.randint(-8, 8) for _ in range(d)] for _ in range(d)]
        adj, det = adjugate_det(M)
        fails["adjugate"] += any(
            sum(adj[i][t] * M[t][j] for t in range(d)) != det * (i == j)
            for i, j in product(range(d), repeat=2)
        )
    verdict("8 lattice layer", not any(fails.values()), str(fails))


def test_crt_oracle(verdict):
    rng = Random(9)
    failures = 0
    for _ in range(10**4):
        system = [Congruence(rng.randint(-(10**6), 10**6), rng.randint(1, 60)) for _ in range(rng.randint(1, 3))]
        L = lcm(*(c.modulus for c in system))
        first = system[0]
        sols = [x for x in range(first.residue, L, first.modulus) if all(x in c for c in system)]
        got = crt_general(system)
        ok = got is None if not sols else got == Congruence(sols[0], L) and len(sols) == 1
        failures += not ok
    verdict("9 CRT oracle equivalence", failures == 0, f"failures={failures} of 10000")


def test_diagonal_frobenius_spot_check(verdict):
    rng = Random(10)
    counterexamples = []
    inconclusive = checked = 0
    for _ in range(50):
        while True:
            A = tuple(tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(2))
            if A[0][0] * A[1][1] - A[0][1] * A[1][0] and all(A[0][j] or A[1][j] for j in range(3)):
                break
        t = compute_profile(ILPEInstance(A, (0, 0))).M
        res = check_diagonal_property(A, t, side=25)
        if isinstance(res, Holds):
            checked += res.checked
            inconclusive += res.inconclusive
        else:
            counterexamples.append((A, t, res))
    verdict(
        "10 diagonal Frobenius spot check",
        not counterexamples,
        f"counterexamples={len(counterexamples)} points={checked} inconclusive={inconclusive}",
    )


def test_uss_scaling_smoke(verdict):
    rng = Random(12)
    a = tuple(sorted(rng.sample(range(100, 1000), 6)))
    g = content_gcd(a)
    times = []
    for bits in (64, 128, 256, 512, 1024):
        insts = []
        for _ in range(50):
            b = rng.getrandbits(bits) | (1 << (bits - 1))
            insts.append(USSInstance(a, b - b % g))
        best = float("inf")
        for _ in range(7):
            start = time.perf_counter()
            for inst in insts:
                solve_uss(inst)
            best = min(best, time.perf_counter() - start)
        times.append(best)
    ratios = [later / earlier for earlier, later in zip(times, times[1:])]
    verdict(
        "scaling smoke (64..1024 bits)",
        max(ratios) <= 4.0,
        "ratios=" + ", ".join(f"{r:.2f}" for r in ratios),
    )
