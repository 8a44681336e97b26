"""Random instance generators shared by the unit and acceptance tests."""
from math import gcd
from random import Random

from totalip.core import ILPEInstance, USSInstance, content_gcd
from totalip.ilpe import compute_profile
from totalip.lattice import bareiss_det


def regime_uss(rng: Random, n_max: int = 8, a_max: int = 200, b_extra: int = 5000) -> USSInstance:
    """Random instance with ``b (i-1) >= a_i^2`` for all i >= 2 and gcd(a) | b."""
    n = rng.randint(1, n_max)
    a = sorted(rng.sample(range(1, a_max + 1), n))
    g = content_gcd(a)
    lo = max([-(-a[i - 1] ** 2 // (i - 1)) for i in range(2, n + 1)], default=0)
    b = lo + rng.randint(0, b_extra)
    b += -b % g
    return USSInstance(tuple(a), b)


def peeling_tuple(rng: Random):
    """(a, b, d): a_1..a_{n-1} distinct multiples of d >= 2, a_n coprime to d, b (n-1) >= a_n^2."""
    n = rng.randint(2, 8)
    d = rng.randint(2, 60)
    mults = sorted(rng.sample(range(1, 50), n - 1))
    head = [m * d for m in mults]
    an = head[-1] + rng.randint(1, 200)
    while gcd(an, d) != 1:
        an += 1
    lo = -(-an * an // (n - 1))
    b = lo + rng.choice([0, rng.randint(0, 10), rng.randint(0, 10**6), rng.randint(0, 10**30)])
    return tuple(head) + (an,), b, d


def independent_head(rng: Random, d: int, n: int, bound: int):
    while True:
        A = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(d))
        if bareiss_det([r[:d] for r in A]):
            return A


def deep_ilpe(rng: Random, d_max: int = 4, n_max: int = 8, bound: int = 10, spread: int = 20):
    """``b = A y`` with ``y >= M`` coordinate-wise, M from the profile of A."""
    d = rng.randint(1, d_max)
    n = rng.randint(d, n_max)
    A = independent_head(rng, d, n, bound)
    M = compute_profile(ILPEInstance(A, (0,) * d)).M
    y = [M + rng.randint(0, spread) for _ in range(n)]
    b = tuple(sum(a * v for a, v in zip(row, y)) for row in A)
    return ILPEInstance(A, b), M
