"""Command-line front end.

Every command reads one JSON document (``--input`` or stdin), writes one
JSON document (``--output`` or stdout) and signals the outcome through its
exit code::

    0  Solved / Holds
    2  NotInRegime
    3  NotInLattice / Infeasible / Rejected
    4  BudgetExceeded
    1  usage or internal error

Errors are printed to stderr as a single-line JSON object.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import hardness, lattice, oracle, uss
from .core import (
    BudgetExceeded,
    DimensionError,
    HILPInstance,
    ILPEInstance,
    ILPInstance,
    InvalidInstance,
    PreconditionError,
    Solution,
    Status,
    TotalIPError,
    USSInstance,
    as_matrix,
    as_vector,
    dumps_instance,
    dumps_solution,
    instance_from_dict,
    loads_solution,
    verify_solution,
)
from .ilpe import DEFAULT_SEARCH_BUDGET, compute_profile, solve_hilp, solve_ilp, solve_ilpe_total

HOLDS = "Holds"
REJECTED = "Rejected"

EXIT_CODES = {
    Status.SOLVED.value: 0,
    HOLDS: 0,
    Status.NOT_IN_REGIME.value: 2,
    Status.NOT_IN_LATTICE.value: 3,
    Status.INFEASIBLE.value: 3,
    REJECTED: 3,
    Status.BUDGET_EXCEEDED.value: 4,
    Status.ERROR.value: 1,
}


class UsageError(TotalIPError):
    code = "usage"


@dataclass
class RunReport:
    command: str
    instance_digest: Optional[str]
    outcome: str
    reference: Optional[str]
    wall_time: float

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]


@dataclass
class _Outcome:
    status: str
    text: str


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _status_doc(status: str, reason: str = "", **extra) -> _Outcome:
    doc = {"status": status}
    if reason:
        doc["reason"] = reason
    doc.update(extra)
    return _Outcome(status, _compact(doc))


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- input -----------------------------------------------------------------------

def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path: Optional[str]):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"malformed JSON: {exc.msg} at line {exc.lineno}") from None


def _load(args, *kinds):
    inst = instance_from_dict(_read_json(args.input))
    if kinds and not isinstance(inst, kinds):
        want = "/".join(k.__name__ for k in kinds)
        raise InvalidInstance(f"expected a {want} instance, got {type(inst).__name__}")
    # ILPInstance subclasses ILPEInstance; an ilp file is not an ilpe instance here
    if kinds == (ILPEInstance,) and isinstance(inst, ILPInstance):
        raise InvalidInstance("expected an ilpe instance, got an ilp instance")
    args._digest = hashlib.sha256(dumps_instance(inst).encode()).hexdigest()
    return inst


# -- commands --------------------------------------------------------------------

def cmd_uss_solve(args) -> _Outcome:
    inst = _load(args, USSInstance)
    budget = args.budget if args.budget is not None else uss.DEFAULT_BUDGET
    if uss.check_regime(inst, args.k):
        sol = uss.solve_uss(inst, args.k, budget=budget)
    elif args.strict:
        return _status_doc(Status.NOT_IN_REGIME.value, f"instance is outside the k={args.k} regime")
    else:
        sol = uss.fallback_solve(inst, budget=budget)
        if sol is None:
            return _status_doc(Status.INFEASIBLE.value, "no non-negative representation exists")
    x = inst.lift(sol.x)
    if args.verify:
        weights = inst.input_weights
        if any(v < 0 for v in x) or sum(a * v for a, v in zip(weights, x)) != inst.b:
            return _status_doc(Status.ERROR.value, "emitted vector failed verification")
    return _Outcome(Status.SOLVED.value, dumps_solution(Solution(x, True)))


def cmd_uss_check(args) -> _Outcome:
    inst = _load(args, USSInstance)
    rep = uss.regime_report(inst)
    ok = uss.check_regime(inst, args.k)
    status = Status.SOLVED.value if ok else Status.NOT_IN_REGIME.value
    doc = {
        "status": "InRegime" if ok else Status.NOT_IN_REGIME.value,
        "k": args.k,
        "k_min": rep.k_min,
        "gcd_divides": rep.gcd_divides,
        "erdos_graham": rep.erdos_graham,
    }
    return _Outcome(status, _compact(doc))


def _ilpe_outcome(inst, result, args) -> _Outcome:
    if result.solution is None:
        return _status_doc(result.status.value, result.reason)
    if args.verify and not verify_solution(inst, result.solution.x):
        return _status_doc(Status.ERROR.value, "emitted vector failed verification")
    return _Outcome(Status.SOLVED.value, dumps_solution(result.solution))


def _search_budget(args) -> int:
    return args.budget if args.budget is not None else DEFAULT_SEARCH_BUDGET


def cmd_ilpe_solve(args) -> _Outcome:
    inst = _load(args, ILPEInstance)
    return _ilpe_outcome(inst, solve_ilpe_total(inst, max_combinations=_search_budget(args)), args)


def cmd_ilpe_profile(args) -> _Outcome:
    inst = _load(args, ILPEInstance)
    try:
        prof = compute_profile(inst)
    except PreconditionError as exc:
        return _status_doc(Status.NOT_IN_REGIME.value, str(exc))
    doc = {"V": str(prof.V), "Delta": str(prof.Delta), "M": str(prof.M)}
    return _Outcome(Status.SOLVED.value, _compact(doc))


def cmd_ilp_solve(args) -> _Outcome:
    inst = _load(args, ILPInstance)
    return _ilpe_outcome(inst, solve_ilp(inst, max_combinations=_search_budget(args)), args)


def cmd_hilp_solve(args) -> _Outcome:
    inst = _load(args, HILPInstance)
    return _ilpe_outcome(inst, solve_hilp(inst, max_combinations=_search_budget(args)), args)


def _certificate_path(args) -> Optional[Path]:
    if args.certificate:
        return Path(args.certificate)
    if args.output:
        out = Path(args.output)
        return out.with_name(out.stem + ".cert.json")
    return None


def cmd_hardness_gen(args) -> _Outcome:
    gen = hardness.gen_lower_bound_instance(args.d)
    inst = gen.instance
    args._digest = hashlib.sha256(dumps_instance(inst).encode()).hexdigest()
    cert = hardness.certify_infeasible(inst)
    if args.verify and not hardness.replay_certificate(inst.A, inst.b, cert):
        return _status_doc(Status.ERROR.value, "certificate did not replay")
    doc = {
        "parameters": {
            "d": gen.d,
            "c": gen.c,
            "primes": [str(p) for p in gen.primes],
            "p_last": str(gen.p_last),
            "P": str(gen.P),
            "Delta": str(gen.Delta),
            "alpha": [_frac(a) for a in gen.alpha],
        },
        "certificate": cert.to_dict(),
    }
    path = _certificate_path(args)
    if path is not None:
        path.write_text(json.dumps(doc, indent=2) + "\n")
        args._reference = str(path)
    return _Outcome(Status.SOLVED.value, dumps_instance(inst))


def cmd_hardness_bach_bound(args) -> _Outcome:
    inst = _load(args, ILPEInstance)
    return _Outcome(Status.SOLVED.value, _compact({"bound": str(hardness.bach_bound(inst.A))}))


def _check_vector(inst, x) -> bool:
    if isinstance(inst, USSInstance) and inst.merge and len(x) == inst.n_input:
        weights = inst.input_weights
        return all(v >= 0 for v in x) and sum(a * v for a, v in zip(weights, x)) == inst.b
    return verify_solution(inst, x)


def cmd_oracle_check(args) -> _Outcome:
    inst = _load(args)
    sol = loads_solution(_read_text(args.solution))
    try:
        ok = _check_vector(inst, sol.x)
    except DimensionError as exc:
        return _status_doc(REJECTED, str(exc))
    if ok:
        return _status_doc(HOLDS)
    return _status_doc(REJECTED, "vector is not a non-negative solution")


def cmd_oracle_frobenius(args) -> _Outcome:
    if args.a:
        weights = args.a
    else:
        weights = list(_load(args, USSInstance).a)
    budget = oracle.SearchBudget(max_states=args.budget) if args.budget else oracle.DEFAULT_BUDGET
    g = oracle.brute_frobenius(weights, budget)
    return _Outcome(Status.SOLVED.value, _compact({"frobenius": str(g)}))


def cmd_lattice_hnf(args) -> _Outcome:
    obj = _read_json(args.input)
    if not isinstance(obj, dict) or "A" not in obj:
        raise InvalidInstance("expected an object with a matrix field 'A' (generators are its columns)")
    A = as_matrix(obj["A"])
    if not A or not A[0]:
        raise InvalidInstance("generator matrix is empty")
    basis = lattice.hnf_basis([tuple(row[j] for row in A) for j in range(len(A[0]))])
    doc = {
        "basis": [[str(v) for v in row] for row in basis.matrix],
        "rank": basis.rank,
        "pivots": list(basis.pivots),
        "det": str(basis.det) if basis.full_rank else None,
    }
    if "b" in obj:
        b = as_vector(obj["b"])
        if len(b) != len(A):
            raise DimensionError(f"b has length {len(b)}, A has {len(A)} rows")
        coeffs = lattice.in_lattice(basis, b)
        doc["contains_b"] = coeffs is not None
    return _Outcome(Status.SOLVED.value, _compact(doc))


# -- parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", help="instance file (default: stdin)")
    p.add_argument("--output", help="result file (default: stdout)")
    p.add_argument("--budget", type=int, help="search budget for fallbacks and oracles")
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--report", help="also write a run report (JSON) to this path")
    return p


COMMANDS = {
    ("uss", "solve"): cmd_uss_solve,
    ("uss", "check"): cmd_uss_check,
    ("ilpe", "solve"): cmd_ilpe_solve,
    ("ilpe", "profile"): cmd_ilpe_profile,
    ("ilp", "solve"): cmd_ilp_solve,
    ("hilp", "solve"): cmd_hilp_solve,
    ("hardness", "gen"): cmd_hardness_gen,
    ("hardness", "bach-bound"): cmd_hardness_bach_bound,
    ("oracle", "check"): cmd_oracle_check,
    ("oracle", "frobenius"): cmd_oracle_frobenius,
    ("lattice", "hnf"): cmd_lattice_hnf,
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="totalip", description="Exact solvers for total integer programs.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    subs = {}
    for group, action in COMMANDS:
        if group not in subs:
            subs[group] = groups.add_parser(group).add_subparsers(
                dest="action", required=True, parser_class=_Parser
            )
        sp = subs[group].add_parser(action, parents=[common])
        sp.set_defaults(func=COMMANDS[group, action])
        if group == "uss":
            sp.add_argument("--k", type=int, default=1)
        if (group, action) == ("uss", "solve"):
            sp.add_argument(
                "--strict",
                action="store_true",
                help="report NotInRegime instead of falling back to exact search",
            )
        if (group, action) == ("hardness", "gen"):
            sp.add_argument("--d", type=int, required=True)
            sp.add_argument("--certificate", help="certificate file (default: next to --output)")
        if (group, action) == ("oracle", "check"):
            sp.add_argument("--solution", required=True, help="solution file to check")
        if (group, action) == ("oracle", "frobenius"):
            sp.add_argument("--a", type=int, nargs="+", help="coin weights (else read a uss instance)")
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _error(exc_code: str, message: str) -> None:
    sys.stderr.write(_compact({"error": exc_code, "message": message}))


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        args._digest = None
        args._reference = None
        if args.budget is not None and args.budget <= 0:
            raise UsageError("--budget must be positive")
        if getattr(args, "k", 1) < 1:
            raise PreconditionError("k must be >= 1")
        try:
            out = args.func(args)
        except BudgetExceeded as exc:
            out = _status_doc(Status.BUDGET_EXCEEDED.value, str(exc))
        _emit(out.text, args.output)
        status = out.status
    except TotalIPError as exc:
        _error(exc.code, str(exc))
        status = Status.ERROR.value
    except Exception as exc:  # noqa: BLE001 - last-resort guard for the exit-code contract
        _error("internal", f"{type(exc).__name__}: {exc}")
        status = Status.ERROR.value
    code = EXIT_CODES[status]
    if args is not None and getattr(args, "report", None):
        report = RunReport(
            command=f"{args.group} {args.action}",
            instance_digest=args._digest,
            outcome=status,
            reference=args._reference or args.output,
            wall_time=round(time.perf_counter() - start, 6),
        )
        Path(args.report).write_text(_compact(asdict(report)))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
