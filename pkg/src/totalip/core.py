"""Problem and solution data model, exact verification, and the instance file schema.

Every integer is a Python ``int`` (arbitrary precision) and every rational a
``fractions.Fraction``. Instances are frozen dataclasses holding tuples, so
they are hashable and safe to share.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Sequence, Union

Vector = tuple  # tuple[int, ...]
Matrix = tuple  # tuple[tuple[int, ...], ...], row-major


class TotalIPError(Exception):
    """Base class for structured errors raised by this package."""

    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DimensionError(TotalIPError, ValueError):
    code = "dimension_mismatch"


class InvalidInstance(TotalIPError, ValueError):
    code = "invalid_instance"


class PreconditionError(TotalIPError, ValueError):
    code = "precondition_violated"


class BudgetExceeded(TotalIPError, RuntimeError):
    code = "budget_exceeded"


class InvariantViolation(TotalIPError, AssertionError):
    """An internal guarantee failed; ``diagnostics`` carries the state at failure."""

    code = "invariant_violation"

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class Status(str, Enum):
    """Outcome of a solve; the string values are what reports and the CLI print."""

    SOLVED = "Solved"
    NOT_IN_REGIME = "NotInRegime"
    NOT_IN_LATTICE = "NotInLattice"
    INFEASIBLE = "Infeasible"
    BUDGET_EXCEEDED = "BudgetExceeded"
    ERROR = "Error"


def _int(v) -> int:
    if isinstance(v, bool):
        raise InvalidInstance(f"boolean is not an integer: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        s = v.strip()
        body = s[1:] if s[:1] in "+-" else s
        if not body.isdigit():
            raise InvalidInstance(f"not a decimal integer: {v!r}")
        return int(s)
    raise InvalidInstance(f"expected integer, got {type(v).__name__}")


def as_vector(values) -> Vector:
    return tuple(_int(v) for v in values)


def as_matrix(rows) -> Matrix:
    rows = tuple(as_vector(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionError("matrix rows have different lengths")
    return rows


def columns(A: Matrix) -> list[Vector]:
    return [tuple(col) for col in zip(*A)]


def from_columns(cols: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(row) for row in zip(*cols))


def mat_vec(A: Matrix, x: Sequence) -> tuple:
    return tuple(sum(a * v for a, v in zip(row, x)) for row in A)


@dataclass(frozen=True)
class USSInstance:
    a: Vector
    b: int
    # merge[j] lists the original input positions folded into weight a[j]
    merge: tuple = field(default=(), compare=False, repr=False)
    n_input: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if not self.a:
            raise InvalidInstance("USS instance needs at least one weight")
        if any(x <= 0 for x in self.a):
            raise InvalidInstance("USS weights must be positive")
        if any(x >= y for x, y in zip(self.a, self.a[1:])):
            raise InvalidInstance("USS weights must be strictly increasing; use normalize_uss")
        if self.b < 0:
            raise InvalidInstance("USS target must be non-negative")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def input_weights(self) -> Vector:
        """Weights in the order they were given, duplicates included."""
        if not self.merge:
            return self.a
        out = [0] * self.n_input
        for w, positions in zip(self.a, self.merge):
            for pos in positions:
                out[pos] = w
        return tuple(out)

    def lift(self, x: Sequence[int]) -> Vector:
        """Map a solution over the normalized weights back to input order."""
        if not self.merge:
            return tuple(x)
        out = [0] * self.n_input
        for xj, positions in zip(x, self.merge):
            # all of a duplicate's value goes to its first occurrence
            out[positions[0]] += xj
        return tuple(out)


@dataclass(frozen=True)
class ILPEInstance:
    A: Matrix
    b: Vector

    def __post_init__(self):
        if not self.A or not self.A[0]:
            raise InvalidInstance("ILPE matrix must have at least one row and column")
        if len({len(r) for r in self.A}) != 1:
            raise DimensionError("matrix rows have different lengths")
        if len(self.b) != len(self.A):
            raise DimensionError(f"b has length {len(self.b)}, A has {len(self.A)} rows")

    @property
    def d(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.A)


@dataclass(frozen=True)
class ILPInstance(ILPEInstance):
    """``A x <= b`` with ``x >= 0`` integer."""


@dataclass(frozen=True)
class HILPInstance:
    A1: Matrix
    b1: Vector
    A2: Matrix
    b2: Vector
    n: int = -1

    def __post_init__(self):
        widths = {len(r) for r in self.A1} | {len(r) for r in self.A2}
        if self.n >= 0:
            widths.add(self.n)
        if len(widths) != 1:
            raise DimensionError("A1 and A2 must have the same number of columns")
        if self.n < 0:
            object.__setattr__(self, "n", widths.pop())
        if len(self.b1) != len(self.A1) or len(self.b2) != len(self.A2):
            raise DimensionError("right-hand sides do not match row counts")
        if self.n == 0:
            raise InvalidInstance("HILP instance needs at least one column")


Instance = Union[USSInstance, ILPEInstance, ILPInstance, HILPInstance]


@dataclass(frozen=True)
class Solution:
    x: Vector
    verified: bool = False

    def to_dict(self) -> dict:
        return {"x": [str(v) for v in self.x], "verified": self.verified}


def normalize_uss(raw: Sequence[int], b: int) -> USSInstance:
    """Sort weights ascending and merge duplicates, remembering where each came from.

    >>> normalize_uss([5, 3, 3], 8).a
    (3, 5)
    """
    raw = as_vector(raw)
    b = _int(b)
    if not raw:
        raise InvalidInstance("USS instance needs at least one weight")
    if any(v <= 0 for v in raw):
        raise InvalidInstance("USS weights must be positive")
    groups: dict[int, list[int]] = {}
    for pos, v in enumerate(raw):
        groups.setdefault(v, []).append(pos)
    a = tuple(sorted(groups))
    merge = tuple(tuple(groups[v]) for v in a)
    return USSInstance(a, b, merge=merge, n_input=len(raw))


def _check_len(x, n):
    if len(x) != n:
        raise DimensionError(f"solution has length {len(x)}, instance has {n} variables")


def verify_solution(instance: Instance, x: Sequence[int]) -> bool:
    """Exact check that ``x`` is a non-negative integer solution of ``instance``."""
    x = tuple(x)
    if isinstance(instance, USSInstance):
        _check_len(x, instance.n)
        if any(v < 0 for v in x):
            return False
        return sum(a * v for a, v in zip(instance.a, x)) == instance.b
    if isinstance(instance, ILPInstance):
        _check_len(x, instance.n)
        if any(v < 0 for v in x):
            return False
        return all(l <= r for l, r in zip(mat_vec(instance.A, x), instance.b))
    if isinstance(instance, ILPEInstance):
        _check_len(x, instance.n)
        if any(v < 0 for v in x):
            return False
        return mat_vec(instance.A, x) == instance.b
    if isinstance(instance, HILPInstance):
        _check_len(x, instance.n)
        if any(v < 0 for v in x):
            return False
        ineq = all(l <= r for l, r in zip(mat_vec(instance.A1, x), instance.b1))
        return ineq and mat_vec(instance.A2, x) == instance.b2
    raise TypeError(f"unsupported instance type {type(instance).__name__}")


def verified(instance: Instance, x: Sequence[int]) -> Solution:
    """Build a Solution, raising if ``x`` does not actually solve ``instance``."""
    x = tuple(x)
    if not verify_solution(instance, x):
        raise InvariantViolation("solver produced a vector that fails verification", x=x)
    return Solution(x, True)


def content_gcd(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


# -- instance file schema ----------------------------------------------------

def _enc_vec(v):
    return [str(x) for x in v]


def _enc_mat(A):
    return [[str(x) for x in row] for row in A]


def instance_to_dict(inst: Instance) -> dict:
    if isinstance(inst, USSInstance):
        return {"kind": "uss", "a": _enc_vec(inst.a), "b": str(inst.b)}
    if isinstance(inst, ILPInstance):
        return {"kind": "ilp", "A": _enc_mat(inst.A), "b": _enc_vec(inst.b)}
    if isinstance(inst, ILPEInstance):
        return {"kind": "ilpe", "A": _enc_mat(inst.A), "b": _enc_vec(inst.b)}
    if isinstance(inst, HILPInstance):
        return {
            "kind": "hilp",
            "A1": _enc_mat(inst.A1),
            "b1": _enc_vec(inst.b1),
            "A2": _enc_mat(inst.A2),
            "b2": _enc_vec(inst.b2),
        }
    raise TypeError(f"unsupported instance type {type(inst).__name__}")


def _require(obj, *names):
    missing = [k for k in names if k not in obj]
    if missing:
        raise InvalidInstance(f"missing field(s): {', '.join(missing)}")


def instance_from_dict(obj: dict) -> Instance:
    if not isinstance(obj, dict):
        raise InvalidInstance("instance must be a JSON object")
    kind = obj.get("kind")
    if kind == "uss":
        _require(obj, "a", "b")
        a = as_vector(obj["a"])
        b = _int(obj["b"])
        # files written by this package are already normalized; anything else gets normalized
        if a and all(0 < x < y for x, y in zip(a, a[1:])) and a[0] > 0:
            return USSInstance(a, b)
        return normalize_uss(a, b)
    if kind in ("ilpe", "ilp"):
        _require(obj, "A", "b")
        cls = ILPEInstance if kind == "ilpe" else ILPInstance
        return cls(as_matrix(obj["A"]), as_vector(obj["b"]))
    if kind == "hilp":
        _require(obj, "A1", "b1", "A2", "b2")
        A1, A2 = as_matrix(obj["A1"]), as_matrix(obj["A2"])
        n = len(A1[0]) if A1 else (len(A2[0]) if A2 else 0)
        return HILPInstance(A1, as_vector(obj["b1"]), A2, as_vector(obj["b2"]), n=n)
    raise InvalidInstance(f"unknown instance kind {kind!r}")


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def loads_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"malformed JSON: {exc.msg} at line {exc.lineno}") from None
    return instance_from_dict(obj)


def solution_from_dict(obj: dict) -> Solution:
    if not isinstance(obj, dict) or "x" not in obj:
        raise InvalidInstance("solution must be an object with field 'x'")
    return Solution(as_vector(obj["x"]), bool(obj.get("verified", False)))


def dumps_solution(sol: Solution) -> str:
    return json.dumps(sol.to_dict(), separators=(",", ":")) + "\n"


def loads_solution(text: str) -> Solution:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"malformed JSON: {exc.msg} at line {exc.lineno}") from None
    return solution_from_dict(obj)
