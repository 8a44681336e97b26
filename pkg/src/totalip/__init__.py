"""Exact solvers for integer programs in regimes where a solution is guaranteed.

Modules: ``core`` (data model and schema), ``modular`` (congruences),
``lattice`` (HNF and determinants), ``lpexact`` (rational LP feasibility),
``uss`` (unbounded subset sum), ``ilpe`` (equality-form integer programs),
``hardness`` (infeasible instances deep in the cone), ``oracle``
(brute-force cross-checks) and ``cli``.
"""
from .core import (
    BudgetExceeded,
    DimensionError,
    HILPInstance,
    ILPEInstance,
    ILPInstance,
    InvalidInstance,
    InvariantViolation,
    PreconditionError,
    Solution,
    Status,
    TotalIPError,
    USSInstance,
    normalize_uss,
    verify_solution,
)
from .ilpe import compute_profile, solve_hilp, solve_ilp, solve_ilpe_total
from .uss import check_regime, solve_uss

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DimensionError",
    "HILPInstance",
    "ILPEInstance",
    "ILPInstance",
    "InvalidInstance",
    "InvariantViolation",
    "PreconditionError",
    "Solution",
    "Status",
    "TotalIPError",
    "USSInstance",
    "check_regime",
    "compute_profile",
    "normalize_uss",
    "solve_hilp",
    "solve_ilp",
    "solve_ilpe_total",
    "solve_uss",
    "verify_solution",
]
