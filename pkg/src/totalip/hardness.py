"""Instances that sit deep inside the real cone yet have no non-negative integer solution.

The construction uses d primes p_1..p_d close to each other, placed on the
diagonal, plus one smaller prime p_{d+1} repeated down a last column. The
right-hand side forces the last coefficient to be -1 modulo every p_i,
which pushes it so high that some diagonal coefficient must go negative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod
from typing import Sequence

from .core import BudgetExceeded, ILPEInstance, InvalidInstance, PreconditionError, TotalIPError
from .modular import Congruence, crt_general, solve_scaled_congruence

PRIME_RANGE_LIMIT = 10**8
MAX_C_RETRIES = 1000


class CertificateError(TotalIPError, ValueError):
    code = "certificate_failed"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes in ``[lo, hi]`` in ascending order."""
    if lo > hi:
        raise PreconditionError(f"empty range [{lo}, {hi}]")
    if hi > PRIME_RANGE_LIMIT or hi - lo > PRIME_RANGE_LIMIT:
        raise BudgetExceeded(f"prime search up to {hi} exceeds {PRIME_RANGE_LIMIT}")
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def threshold_cleared(alpha: Fraction, Delta: int, d: int) -> bool:
    """``alpha > Delta**d / (20 sqrt(d))``, decided by comparing squares."""
    return alpha > 0 and 400 * d * alpha * alpha > Delta ** (2 * d)


@dataclass(frozen=True)
class LowerBoundInstance:
    d: int
    primes: tuple
    p_last: int
    P: int
    Delta: int
    A: tuple
    b: tuple
    alpha: tuple
    c: int = 5

    @property
    def instance(self) -> ILPEInstance:
        return ILPEInstance(self.A, self.b)

    def validate(self) -> None:
        """Raise InvalidInstance unless every structural invariant holds."""
        d, ps, q = self.d, self.primes, self.p_last
        if len(ps) != d or len(set(ps)) != d or not all(is_prime(p) for p in ps + (q,)):
            raise InvalidInstance("need d distinct primes plus a last prime")
        if self.P != prod(ps) or self.Delta != max(ps):
            raise InvalidInstance("P or Delta does not match the primes")
        for i in range(d):
            expect = tuple(ps[i] if j == i else 0 for j in range(d)) + (q,)
            if self.A[i] != expect:
                raise InvalidInstance(f"row {i} of A has the wrong shape")
            if self.b[i] != q * (self.P - 1) - ps[i]:
                raise InvalidInstance(f"b[{i}] does not match the construction")
        # Delta/(2 sqrt d) <= q <= Delta/sqrt d
        if not (4 * d * q * q >= self.Delta**2 >= d * q * q):
            raise InvalidInstance("last prime is outside its window")
        for i in range(d):
            if sum(self.A[i][j] * self.alpha[j] for j in range(d + 1)) != self.b[i]:
                raise InvalidInstance("A alpha != b")
        if not all(threshold_cleared(a, self.Delta, d) for a in self.alpha):
            raise InvalidInstance("some alpha does not clear Delta^d / (20 sqrt d)")


def _largest_prime_in_window(Delta: int, d: int):
    # q ranges over Delta/(2 sqrt d) <= q <= Delta/sqrt d; start from isqrt bounds and trim exactly
    hi = isqrt(Delta * Delta // d) + 1
    lo = max(2, isqrt(Delta * Delta // (4 * d)) - 1)
    for q in range(hi, lo - 1, -1):
        if 4 * d * q * q >= Delta * Delta >= d * q * q and is_prime(q):
            return q
    return None


def gen_lower_bound_instance(d: int, *, c_start: int = 5) -> LowerBoundInstance:
    """Deterministic lower-bound instance in dimension ``d >= 2``."""
    if d < 2:
        raise PreconditionError("the construction needs d >= 2")
    for c in range(c_start, c_start + MAX_C_RETRIES):
        hi = c * d * d
        lo = c * d * (d - 1)  # c d^2 (1 - 1/d)
        window = primes_in_range(lo, hi)
        if len(window) < d:
            continue
        ps = tuple(sorted(window[-d:], reverse=True))
        Delta = ps[0]
        q = _largest_prime_in_window(Delta, d)
        if q is None or q in ps:
            continue
        P = prod(ps)
        A = tuple(tuple(ps[i] if j == i else 0 for j in range(d)) + (q,) for i in range(d))
        b = tuple(q * (P - 1) - p for p in ps)
        alpha = tuple(Fraction(P * q, 2 * p) - 1 - Fraction(q, p) for p in ps) + (Fraction(P, 2),)
        inst = LowerBoundInstance(d, ps, q, P, Delta, A, b, alpha, c)
        inst.validate()
        return inst
    raise BudgetExceeded(f"no prime windows found for d={d} within {MAX_C_RETRIES} values of c")


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Row-wise congruences on the last coefficient and the row they break.

    ``congruences[i]`` is the class of the last coefficient forced by row i
    (modulo p_i); together they force ``last >= forced_min``, and then row
    ``row`` needs ``beta_row * p_row == residual < 0``.
    """

    congruences: tuple
    combined: Congruence
    forced_min: int
    row: int
    residual: int

    def to_dict(self) -> dict:
        return {
            "congruences": [
                {"residue": str(c.residue), "modulus": str(c.modulus)} for c in self.congruences
            ],
            "combined": {"residue": str(self.combined.residue), "modulus": str(self.combined.modulus)},
            "forced_min": str(self.forced_min),
            "row": self.row,
            "residual": str(self.residual),
        }


def _forced_congruences(A, b) -> list[Congruence]:
    d = len(A)
    out = []
    for i in range(d):
        p, q = A[i][i], A[i][d]
        c = solve_scaled_congruence(b[i] % p, q % p, p)
        if c is None:
            raise CertificateError(f"row {i} admits no value of the last coefficient")
        out.append(c)
    return out


def _check_shape(A, b) -> int:
    d = len(A)
    if d < 2 or len(b) != d or any(len(row) != d + 1 for row in A):
        raise InvalidInstance("expected a d x (d+1) matrix")
    for i in range(d):
        if any(A[i][j] for j in range(d) if j != i) or A[i][i] <= 0 or A[i][d] <= 0:
            raise InvalidInstance(f"row {i} is not of the form p_i e_i + q e_last")
    return d


def certify_infeasible(inst) -> InfeasibilityCertificate:
    """Modular proof that ``A x = b`` has no non-negative integer solution.

    Accepts a LowerBoundInstance or any ILPEInstance of the same shape. Every
    row must force the last coefficient to be -1 modulo its prime, exactly as
    the construction intends; anything else raises CertificateError.
    """
    A, b = inst.A, inst.b
    d = _check_shape(A, b)
    congs = _forced_congruences(A, b)
    for i, c in enumerate(congs):
        if c.residue != c.modulus - 1:
            raise CertificateError(f"row {i} does not force the last coefficient to -1 mod {c.modulus}")
    combined = crt_general(congs)
    if combined is None:
        raise CertificateError("row congruences are inconsistent")
    forced_min = combined.residue
    q = A[0][d]
    residuals = [b[i] - forced_min * q for i in range(d)]
    row = min(range(d), key=lambda i: residuals[i])
    if residuals[row] >= 0:
        raise CertificateError("forced residuals are all non-negative; no contradiction")
    return InfeasibilityCertificate(tuple(congs), combined, forced_min, row, residuals[row])


def replay_certificate(A, b, cert: InfeasibilityCertificate) -> bool:
    """Re-derive everything in ``cert`` from ``(A, b)`` alone; True iff it proves infeasibility."""
    try:
        d = _check_shape(A, b)
        congs = _forced_congruences(A, b)
    except (InvalidInstance, CertificateError):
        return False
    if tuple(congs) != tuple(cert.congruences):
        return False
    combined = crt_general(congs)
    if combined != cert.combined or combined.residue != cert.forced_min:
        return False
    # any valid last coefficient is >= forced_min, and larger values only lower the residual
    residual = b[cert.row] - cert.forced_min * A[cert.row][d]
    return residual == cert.residual and residual < 0


def intro_counterexample(M: int) -> ILPEInstance:
    """``[[9, 10, 9], [0, 0, 1]] x = (M, M)``: integer lattice is Z^2 yet no solution exists."""
    if M < 1:
        raise PreconditionError("M must be >= 1")
    return ILPEInstance(((9, 10, 9), (0, 0, 1)), (M, M))


def bach_bound(A: Sequence[Sequence[int]]) -> int:
    """``d (2 d ||A||_inf + 1)^d`` with ``||A||_inf`` the largest absolute entry."""
    d = len(A)
    norm = max((abs(v) for row in A for v in row), default=0)
    return d * (2 * d * norm + 1) ** d
