"""Extended gcd, modular inverses, and CRT for moduli that need not be coprime."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional


@dataclass(frozen=True)
class Congruence:
    """The residue class ``residue mod modulus``, stored canonically."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __contains__(self, value: int) -> bool:
        return (value - self.residue) % self.modulus == 0


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``g = gcd(|a|, |b|) >= 0`` and ``u*a + v*b == g``.

    The pair is the one produced by the Euclidean algorithm, which keeps
    ``|u| <= max(1, |b| / (2g))``.
    """
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    g, u, v = old_r, old_u, old_v
    if g and b:
        # (u + t*s, v - t*a/g) is also a Bezout pair; pick the u nearest zero
        s = b // g
        w = u % abs(s)
        if w > abs(s) // 2:
            w -= abs(s)
        t = (w - u) // s
        u, v = w, v - t * (a // g)
    return g, u, v


def mod_inverse(a: int, m: int) -> Optional[int]:
    """Inverse of ``a`` modulo ``m`` in ``[0, m)``, or None when gcd(a, m) != 1.

    By convention the inverse modulo 1 is 0.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if m == 1:
        return 0
    g, u, _ = ext_gcd(a % m, m)
    if g != 1:
        return None
    return u % m


def solve_scaled_congruence(x: int, y: int, m: int) -> Optional[Congruence]:
    """Solve ``x == gamma * y (mod m)`` for gamma.

    Returns the full solution set as one congruence modulo ``m / gcd(y, m)``,
    or None when ``gcd(y, m)`` does not divide ``x``.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    g = gcd(y, m)
    if x % g:
        return None
    m2 = m // g
    inv = mod_inverse(y // g, m2)
    return Congruence((x // g) * inv, m2)


def combine(c1: Congruence, c2: Congruence) -> Optional[Congruence]:
    """Intersect two residue classes; None if they are disjoint."""
    g, u, _ = ext_gcd(c1.modulus, c2.modulus)
    diff = c2.residue - c1.residue
    if diff % g:
        return None
    m2 = c2.modulus // g
    lcm = c1.modulus * m2
    # c1.residue + c1.modulus * t hits c2 when t == (diff/g) * u (mod m2)
    t = (diff // g) * u % m2
    return Congruence(c1.residue + c1.modulus * t, lcm)


def crt_general(system: Iterable[Congruence]) -> Optional[Congruence]:
    """Fold a system of congruences pairwise into one class modulo the lcm.

    >>> crt_general([Congruence(1, 4), Congruence(3, 6)])
    Congruence(residue=9, modulus=12)
    """
    items = list(system)
    if not items:
        raise ValueError("congruence system must be non-empty")
    acc = items[0]
    for c in items[1:]:
        acc = combine(acc, c)
        if acc is None:
            return None
    return acc
