"""Budgeted reoptimization and the budget binary search on transition cost.

A reoptimization instance is an ordinary instance whose elements carry an
integral transition cost.  The previous configuration never appears as an
input: it is encoded entirely in those costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .converters import enumeration_bound, solve_enumeration
from .core import (
    Element,
    OracleHandle,
    ProblemInstance,
    Solution,
    as_fraction,
    best_of,
)
from .errors import OracleContractError, PreconditionError
from .problems.oracles import exact_oracle


@dataclass(frozen=True)
class ReoptInstance:
    base: ProblemInstance

    def __post_init__(self):
        if self.base.d > 1:
            raise PreconditionError("reoptimization supports at most one weight budget")
        for e in self.base.elements:
            if e.transition_cost is None:
                raise PreconditionError(f"element {e.id!r} has no transition cost")

    @property
    def b_max(self) -> int:
        return sum(e.transition_cost for e in self.base.elements)

    def budgeted(self, b) -> ProblemInstance:
        """The base instance with transition cost appended as the last budget."""
        base = self.base
        elements = tuple(
            Element(e.id, e.profit, e.weights + (Fraction(e.transition_cost),), e.transition_cost)
            for e in base.elements
        )
        return ProblemInstance(elements, base.structure, base.budgets + (Fraction(b),), base.epsilon)

    def solution(self, ids) -> Solution:
        return Solution.of(self.base, ids)


@dataclass(frozen=True)
class ReoptResult:
    solution: Solution
    chosen_budget: int
    base_profit_estimate: object
    guarantee: tuple
    threshold: Fraction = Fraction(0)
    budget_calls: int = 0
    base_ratio: Fraction = Fraction(1)
    budget_ratio: Fraction = Fraction(1)


def _check_budget(b) -> int:
    b = as_fraction(b, "b")
    if b < 0:
        raise PreconditionError("transition budget must be >= 0")
    if b.denominator != 1:
        raise PreconditionError("transition budget must be an integer")
    return int(b)


def budgeted_solve(inst: ReoptInstance, b, oracle: OracleHandle, eps=None) -> Solution:
    """Approximate the best solution reachable with transition cost ``<= b``."""
    b = _check_budget(b)
    picked = solve_enumeration(inst.budgeted(b), oracle, eps)
    return inst.solution(picked.member_ids)


@dataclass(frozen=True)
class BudgetSolverHandle:
    """A solver for the transition-budgeted problem with a declared ratio."""

    name: str
    declared_ratio: Fraction
    solve: Callable[[ReoptInstance, int], Solution]


def enumeration_budget_solver(oracle: OracleHandle, eps) -> BudgetSolverHandle:
    """``budgeted_solve`` driven by ``oracle``: ratio ``r/(1+r) - eps``."""
    eps = as_fraction(eps, "eps")
    return BudgetSolverHandle(
        f"enumerate[{oracle.name}]",
        enumeration_bound(oracle.declared_ratio, eps),
        lambda inst, b: budgeted_solve(inst, b, oracle, eps),
    )


def exact_budget_solver(cap=None) -> BudgetSolverHandle:
    """Exhaustive solver enforcing every budget, transition cost included."""

    def solve(inst, b):
        return inst.solution(exact_oracle(inst.budgeted(b), cap).member_ids)

    return BudgetSolverHandle("exact", Fraction(1), solve)


@dataclass
class BudgetedSolver:
    """Memoized budget solves plus their running-maximum view.

    ``best_known(b)`` is the best memoized solution with budget ``<= b``; it
    never decreases in ``b`` for a fixed memo, and only grows as more budgets
    are evaluated, which is what the budget search relies on.
    """

    inst: ReoptInstance
    handle: BudgetSolverHandle
    memo: dict = field(default_factory=dict)

    @property
    def calls(self) -> int:
        return len(self.memo)

    def raw(self, b) -> Solution:
        b = _check_budget(b)
        if b not in self.memo:
            self.memo[b] = self.handle.solve(self.inst, b)
        return self.memo[b]

    def best_known(self, b) -> Solution:
        b = _check_budget(b)
        known = [self.memo[k] for k in sorted(self.memo) if k <= b]
        return best_of([self.inst.solution(()), *known])

    def solve(self, b) -> Solution:
        b = _check_budget(b)
        for k in range(b + 1):
            self.raw(k)
        return self.best_known(b)


def monotone_budgeted_solve(inst: ReoptInstance, b, oracle: OracleHandle, eps=None) -> Solution:
    """Best ``budgeted_solve`` result over every budget in ``0..b``."""
    eps = inst.base.epsilon if eps is None else eps
    return BudgetedSolver(inst, enumeration_budget_solver(oracle, eps)).solve(b)


def reopt_solve(
    inst: ReoptInstance,
    base_oracle: OracleHandle,
    eps=None,
    budget_oracle: Optional[OracleHandle] = None,
    budget_solver: Optional[BudgetSolverHandle] = None,
) -> ReoptResult:
    """Smallest transition budget whose budgeted solution keeps ``r2 * Z``.

    ``Z`` is the profit ``base_oracle`` achieves with transition costs
    ignored (an ``r1``-approximation).  Unless ``budget_solver`` is given,
    budgets are solved by ``solve_enumeration`` driven by ``budget_oracle``
    (default: the base oracle) at error ``eps / r1``, so
    ``r2 = r/(1+r) - eps/r1`` and the profit factor ``r1 * r2`` comes out
    as ``r1*r/(1+r) - eps``.
    """
    eps = inst.base.epsilon if eps is None else as_fraction(eps, "eps")
    r1 = base_oracle.declared_ratio
    if budget_solver is None:
        inner_eps = eps / r1
        if not 0 < inner_eps < 1:
            raise PreconditionError("eps / r1 must lie in (0, 1)")
        budget_solver = enumeration_budget_solver(budget_oracle or base_oracle, inner_eps)
    r2 = budget_solver.declared_ratio
    guarantee = (1, r1 * r2)
    b_max = inst.b_max
    Z = base_oracle(inst.budgeted(b_max), Fraction(0)).profit
    if Z == 0:
        return ReoptResult(inst.solution(()), 0, Z, guarantee, Fraction(0), 0, r1, r2)
    threshold = r2 * Z
    solver = BudgetedSolver(inst, budget_solver)
    solver.raw(b_max)
    if solver.best_known(b_max).profit < threshold:
        raise OracleContractError(
            f"budgeted solver reached {solver.best_known(b_max).profit} < r2 * Z = {threshold} "
            "with the full transition budget"
        )
    # invariant: best_known(lo) < threshold (vacuous at lo = -1), best_known(hi) >= threshold
    lo, hi = -1, b_max
    while hi - lo > 1:
        mid = (lo + hi) // 2
        solver.raw(mid)
        if solver.best_known(mid).profit >= threshold:
            hi = mid
        else:
            lo = mid
    return ReoptResult(
        solver.best_known(hi), hi, Z, guarantee, threshold, solver.calls, r1, r2
    )
