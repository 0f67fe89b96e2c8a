"""Run reports: what a solver did, the bound it promises, and its verification.

Reports are plain dictionaries serialized with sorted keys, and every
rational goes through ``encode_number``, so repeated runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .converters import (
    enumeration_bound,
    partition_bound,
    solve_enumeration,
    solve_partition,
    solve_unit,
    unit_bound,
)
from .core import DEFAULT_EPSILON, ProblemInstance, Trace, as_fraction
from .errors import PreconditionError, SchemaError
from .io import encode_number
from .multiconstraint import multi_bound, solve_multi
from .problems.oracles import oracle_by_name
from .reference import brute_force_opt, brute_force_reopt_opt, random_instance
from .reopt import ReoptInstance, reopt_solve

MODES = ("unit", "partition", "enumerate", "multi")
REPORT_VERSION = 1


def _num(x):
    return None if x is None else encode_number(x)


def _solution_dict(sol) -> dict:
    out = {
        "members": list(sol.member_ids),
        "profit": _num(sol.profit),
        "weights": [_num(w) for w in sol.weights],
    }
    if sol.transition_cost is not None:
        out["delta"] = sol.transition_cost
    return out


@dataclass
class RunReport:
    """Everything needed to re-check a run from the instance alone."""

    command: str
    params: dict
    solution: dict
    bound: dict
    oracle_calls: int = 0
    lambda_trace: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    verification: Optional[dict] = None

    def to_dict(self) -> dict:
        doc = {
            "version": REPORT_VERSION,
            "command": self.command,
            "params": self.params,
            "solution": self.solution,
            "bound": self.bound,
            "oracle_calls": self.oracle_calls,
            "lambda_trace": self.lambda_trace,
        }
        if self.extra:
            doc["reopt"] = self.extra
        if self.verification is not None:
            doc["verification"] = self.verification
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def resolve_epsilon(inst: ProblemInstance, ratio, flag=None, from_file: bool = False) -> Fraction:
    """Flag, then the file value, then ``r/n`` for graphs, then the default."""
    if flag is not None:
        return as_fraction(flag, "epsilon")
    if from_file:
        return inst.epsilon
    if inst.structure.kind == "graph" and len(inst) > 1:
        return Fraction(ratio) / len(inst)
    return DEFAULT_EPSILON


def mode_bound(mode: str, r, eps, d: int = 1):
    """``(bound, alpha)`` for a solve mode; ``alpha`` is ``None`` for multi."""
    r = Fraction(r)
    if mode == "unit":
        return unit_bound(r, eps), 1 / (1 + r)
    if mode == "partition":
        return partition_bound(r, eps), 1 / (1 + 2 * r)
    if mode == "enumerate":
        return enumeration_bound(r, eps), 1 / (1 + r)
    if mode == "multi":
        return multi_bound(r, d, eps), None
    raise PreconditionError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")


def run_solve(inst: ProblemInstance, mode: str, oracle_name: str, eps=None, *, seed: int = 0,
              from_file: bool = False) -> RunReport:
    oracle = oracle_by_name(oracle_name, inst)
    eps = resolve_epsilon(inst, oracle.declared_ratio, eps, from_file)
    bound, alpha = mode_bound(mode, oracle.declared_ratio, eps, inst.d)
    trace = Trace()
    if mode == "unit":
        sol = solve_unit(inst, oracle, eps, trace=trace)
    elif mode == "partition":
        sol = solve_partition(inst, oracle, eps, trace=trace)
    elif mode == "enumerate":
        sol = solve_enumeration(inst, oracle, eps, trace=trace)
    else:
        sol = solve_multi(inst, oracle, eps, trace=trace)
    params = {
        "mode": mode,
        "oracle": oracle.name,
        "declared_ratio": _num(oracle.declared_ratio),
        "epsilon": _num(eps),
        "alpha": _num(alpha),
        "seed": seed,
    }
    steps = [
        {"lambda": _num(s.lam), "weight": _num(s.weight), "within_budget": s.within_budget, "tag": s.tag}
        for s in trace.steps
    ]
    return RunReport(
        "solve", params, _solution_dict(sol), {"ratio": _num(bound)},
        trace.oracle_calls, steps,
    )


def budget_call_bound(b_max: int) -> int:
    """``ceil(log2(b_max + 1)) + 1``; the bit length is that ceiling exactly."""
    return int(b_max).bit_length() + 1


def run_reopt(rinst: ReoptInstance, oracle_name: str, eps=None, *, budget_oracle: Optional[str] = None,
              seed: int = 0, from_file: bool = False) -> RunReport:
    base = oracle_by_name(oracle_name, rinst.base)
    inner = oracle_by_name(budget_oracle, rinst.base) if budget_oracle else None
    eps = resolve_epsilon(rinst.base, base.declared_ratio, eps, from_file)
    res = reopt_solve(rinst, base, eps, inner)
    params = {
        "mode": "reopt",
        "oracle": base.name,
        "budget_oracle": (inner or base).name,
        "declared_ratio": _num(base.declared_ratio),
        "epsilon": _num(eps),
        "seed": seed,
    }
    extra = {
        "chosen_budget": res.chosen_budget,
        "Z": _num(res.base_profit_estimate),
        "threshold": _num(res.threshold),
        "b_max": rinst.b_max,
        "budget_calls": res.budget_calls,
        "budget_call_bound": budget_call_bound(rinst.b_max),
        "r1": _num(res.base_ratio),
        "r2": _num(res.budget_ratio),
    }
    bound = {"cost_factor": _num(res.guarantee[0]), "profit_factor": _num(res.guarantee[1])}
    return RunReport("reopt", params, _solution_dict(res.solution), bound, extra=extra)


def verify_solve(inst: ProblemInstance, report: RunReport) -> dict:
    _, opt = brute_force_opt(inst)
    profit = as_fraction(report.solution["profit"])
    bound = as_fraction(report.bound["ratio"])
    ratio = Fraction(1) if opt == 0 else profit / opt
    return {
        "opt": _num(opt),
        "achieved_ratio": _num(ratio),
        "bound_ok": profit >= bound * opt,
        "feasible": inst.is_feasible(report.solution["members"]),
    }


def verify_reopt(rinst: ReoptInstance, report: RunReport) -> dict:
    p_opt, d_opt = brute_force_reopt_opt(rinst)
    sol = report.solution
    profit = as_fraction(sol["profit"])
    cost = sol.get("delta", 0)
    factor = as_fraction(report.bound["profit_factor"])
    return {
        "opt_profit": _num(p_opt),
        "opt_delta": d_opt,
        "achieved_ratio": _num(Fraction(1) if p_opt == 0 else profit / p_opt),
        "cost_ok": cost <= as_fraction(report.bound["cost_factor"]) * d_opt,
        "profit_ok": profit >= factor * p_opt,
        "calls_ok": report.extra["budget_calls"] <= report.extra["budget_call_bound"],
        "feasible": rinst.base.is_feasible(sol["members"]),
    }


def verification_passed(v: dict) -> bool:
    return all(value for key, value in v.items() if key.endswith("_ok") or key in ("feasible", "reproduced"))


def rerun(inst, saved: dict) -> RunReport:
    """Re-run the pipeline recorded in a saved report."""
    try:
        command = saved["command"]
        params = saved["params"]
        if command == "solve":
            return run_solve(inst, params["mode"], params["oracle"], params["epsilon"], seed=params["seed"])
        if command == "reopt":
            if not isinstance(inst, ReoptInstance):
                raise SchemaError("reopt report needs an instance with transition costs")
            return run_reopt(inst, params["oracle"], params["epsilon"],
                             budget_oracle=params["budget_oracle"], seed=params["seed"])
    except KeyError as exc:
        raise SchemaError(f"report is missing field {exc.args[0]!r}") from None
    raise SchemaError(f"unknown report command {command!r}", "command")


def verify_saved(inst, saved: dict) -> dict:
    """Reproduce a saved report and check its guarantee against brute force."""
    fresh = rerun(inst, saved)
    stripped = {k: v for k, v in saved.items() if k != "verification"}
    if fresh.command == "solve":
        out = verify_solve(inst, fresh)
    else:
        out = verify_reopt(inst, fresh)
    out["reproduced"] = fresh.to_dict() == stripped
    return out


@dataclass(frozen=True)
class BatchSpec:
    kind: str
    size: int
    count: int
    seed: int = 0
    mode: str = "enumerate"
    oracle: str = "exact"
    weight_mode: str = "general"
    budgets: int = 1
    epsilon: Optional[Fraction] = None
    reopt: bool = False


def verify_batch(batch: BatchSpec) -> dict:
    """Solve and brute-force ``count`` seeded instances; aggregate in seed order."""
    rows = []
    for seed in range(batch.seed, batch.seed + batch.count):
        inst = random_instance(batch.kind, batch.size, seed, batch.weight_mode, batch.reopt, budgets=batch.budgets)
        if batch.reopt:
            report = run_reopt(inst, batch.oracle, batch.epsilon, seed=seed)
            v = verify_reopt(inst, report)
        else:
            report = run_solve(inst, batch.mode, batch.oracle, batch.epsilon, seed=seed)
            v = verify_solve(inst, report)
        rows.append({"seed": seed, "passed": verification_passed(v), **v})
    ratios = [as_fraction(r["achieved_ratio"]) for r in rows]
    return {
        "kind": batch.kind,
        "size": batch.size,
        "mode": "reopt" if batch.reopt else batch.mode,
        "oracle": batch.oracle,
        "count": batch.count,
        "passed": sum(r["passed"] for r in rows),
        "min_ratio": _num(min(ratios)) if ratios else None,
        "runs": rows,
    }
