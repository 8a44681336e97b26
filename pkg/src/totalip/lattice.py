"""Exact integer lattice machinery.

Vectors are tuples of ints; a "generating family" is a list of such vectors
in Z^d. Matrices are row-major tuples of rows unless a function says it takes
a list of columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .core import DimensionError, InvalidInstance, PreconditionError, TotalIPError
from .modular import ext_gcd


class NonIntegral(TotalIPError, ArithmeticError):
    code = "non_integral"


def ceil_sqrt(n: int) -> int:
    if n < 0:
        raise ValueError("square root of a negative number")
    r = isqrt(n)
    return r if r * r == n else r + 1


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    if any(len(row) != n for row in A):
        raise DimensionError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        p = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (p * row_i[j] - aik * row_k[j]) // prev
        prev = p
    return sign * A[n - 1][n - 1]


def adjugate_det(B: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """Return ``(adj(B), det(B))`` with ``adj(B) @ B == det(B) * I`` exactly.

    Non-singular input goes through fraction-free Gauss-Jordan on ``[B | I]``;
    the right block ends up as ``D * B^-1`` where ``D`` is the final pivot.
    Singular input falls back to cofactors (each a Bareiss determinant).
    """
    n = len(B)
    if any(len(row) != n for row in B):
        raise DimensionError("adjugate of a non-square matrix")
    if n == 0:
        return [], 1
    if n == 1:
        return [[1]], B[0][0]
    M = [list(B[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    swaps, prev = 0, 1
    singular = False
    for k in range(n):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    swaps += 1
                    break
            else:
                singular = True
                break
        p = M[k][k]
        row_k = M[k]
        for i in range(n):
            if i == k:
                continue
            row_i = M[i]
            aik = row_i[k]
            for j in range(2 * n):
                if j != k:
                    row_i[j] = (p * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = p
    if not singular:
        D = M[n - 1][n - 1]
        det = -D if swaps % 2 else D
        R = [row[n:] for row in M]
        if det != D:
            R = [[-v for v in row] for row in R]
        return R, det
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(map(list, B)) if r != i]
            c = bareiss_det(minor)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj, 0


def solve_integral(B: Sequence[Sequence[int]], w: Sequence[int]) -> tuple[int, ...]:
    """The unique integer ``z`` with ``B z = w``; raises NonIntegral if ``z`` is fractional."""
    if len(w) != len(B):
        raise DimensionError("right-hand side does not match matrix size")
    adj, det = adjugate_det(B)
    if det == 0:
        raise PreconditionError("solve_integral needs a non-singular matrix")
    z = []
    for row in adj:
        s = sum(a * v for a, v in zip(row, w))
        if s % det:
            raise NonIntegral(f"B^-1 w is not integral (component {s}/{det})")
        z.append(s // det)
    return tuple(z)


def gram_det(vectors: Sequence[Sequence[int]]) -> int:
    """``det(V^T V)`` for the vectors as columns of ``V``: the squared lattice volume.

    Zero exactly when the vectors are linearly dependent. The empty family has
    Gram determinant 1.
    """
    vs = [tuple(v) for v in vectors]
    G = [[sum(x * y for x, y in zip(u, v)) for v in vs] for u in vs]
    return bareiss_det(G)


@dataclass(frozen=True)
class LatticeBasis:
    """Column-style Hermite normal form basis.

    ``columns[j]`` has its first non-zero entry (the pivot, positive) in row
    ``pivots[j]``; pivot rows strictly increase. In each pivot row the
    entries of earlier columns lie in ``[0, pivot)``. ``transform[j]`` holds
    integer coefficients expressing ``columns[j]`` over the generators.
    """

    columns: tuple
    pivots: tuple
    transform: tuple
    dim: int

    @property
    def rank(self) -> int:
        return len(self.columns)

    @property
    def matrix(self) -> tuple:
        """The basis as a row-major ``dim x rank`` matrix."""
        return tuple(tuple(c[i] for c in self.columns) for i in range(self.dim))

    @property
    def full_rank(self) -> bool:
        return self.rank == self.dim

    @property
    def det(self) -> int:
        """|det| of a full-rank basis (the product of the pivots)."""
        if not self.full_rank:
            raise PreconditionError("determinant of a rank-deficient lattice is not an integer")
        out = 1
        for c, p in zip(self.columns, self.pivots):
            out *= c[p]
        return out

    @property
    def gram(self) -> int:
        return gram_det(self.columns)


def hnf_basis(generators: Sequence[Sequence[int]]) -> LatticeBasis:
    """Basis of the lattice generated by ``generators`` via unimodular column operations."""
    cols = [list(g) for g in generators]
    if not cols:
        raise InvalidInstance("empty generating family")
    d = len(cols[0])
    if any(len(c) != d for c in cols):
        raise DimensionError("generators have different lengths")
    if all(v == 0 for c in cols for v in c):
        raise InvalidInstance("the zero lattice has no basis")
    n = len(cols)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    r = 0
    for i in range(d):
        if r == n:
            break
        for j in range(r + 1, n):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[r][i]
            g, u, v = ext_gcd(a, b)
            ag, bg = a // g, b // g
            cr, cj = cols[r], cols[j]
            cols[r] = [u * x + v * y for x, y in zip(cr, cj)]
            cols[j] = [ag * y - bg * x for x, y in zip(cr, cj)]
            ur, uj = U[r], U[j]
            U[r] = [u * x + v * y for x, y in zip(ur, uj)]
            U[j] = [ag * y - bg * x for x, y in zip(ur, uj)]
        piv = cols[r][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[r] = [-x for x in cols[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for l in range(r):
            q = cols[l][i] // piv
            if q:
                cols[l] = [x - q * y for x, y in zip(cols[l], cols[r])]
                U[l] = [x - q * y for x, y in zip(U[l], U[r])]
        pivots.append(i)
        r += 1
    return LatticeBasis(
        columns=tuple(tuple(c) for c in cols[:r]),
        pivots=tuple(pivots),
        transform=tuple(tuple(u) for u in U[:r]),
        dim=d,
    )


def in_lattice(basis: LatticeBasis, w: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Coefficients ``z`` with ``basis.matrix @ z == w``, or None if ``w`` is not a lattice point."""
    if len(w) != basis.dim:
        raise DimensionError(f"vector has length {len(w)}, lattice lives in Z^{basis.dim}")
    res = list(w)
    z = []
    for col, p in zip(basis.columns, basis.pivots):
        if any(res[i] for i in range(p)):
            return None
        q, rem = divmod(res[p], col[p])
        if rem:
            return None
        z.append(q)
        if q:
            res = [x - q * y for x, y in zip(res, col)]
    if any(res):
        return None
    return tuple(z)


def is_independent(vectors: Sequence[Sequence[int]]) -> bool:
    return gram_det(vectors) != 0


@dataclass(frozen=True)
class VolumeChain:
    """``values[i]`` is V_{d+i}, the volume of L(a_1 .. a_{d+i})."""

    d: int
    values: tuple

    def V(self, i: int) -> int:
        """Volume of the lattice spanned by the first ``i`` columns, ``d <= i``."""
        return self.values[i - self.d]


def volume_chain(A: Sequence[Sequence[int]]) -> VolumeChain:
    """Volumes V_d, ..., V_{n-1} of the prefix lattices of ``A``'s columns."""
    d = len(A)
    n = len(A[0])
    cols = [tuple(row[j] for row in A) for j in range(n)]
    if n < d or bareiss_det([list(c) for c in zip(*cols[:d])]) == 0:
        raise PreconditionError("the first d columns must be linearly independent")
    values = [hnf_basis(cols[:i]).det for i in range(d, max(n, d + 1))]
    return VolumeChain(d, tuple(values))


def rational_combination(vectors: Sequence[Sequence[int]], target: Sequence[int]):
    """Rational coefficients ``c`` with ``sum(c_j v_j) == target``, or None if none exist.

    When the vectors are dependent some solution is returned (free
    coefficients set to zero).
    """
    k = len(vectors)
    rows = [[Fraction(v[i]) for v in vectors] + [Fraction(target[i])] for i in range(len(target))]
    pivot_cols = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    coef = [Fraction(0)] * k
    for i, c in enumerate(pivot_cols):
        coef[c] = rows[i][-1]
    return coef


def independent_rows(M: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal set of linearly independent rows, chosen greedily in order."""
    kept: list[int] = []
    for i, row in enumerate(M):
        if gram_det([M[j] for j in kept] + [row]) != 0:
            kept.append(i)
    return kept
