"""Turning a lambda pair into a feasible solution of the budgeted problem.

Three schemes, in increasing generality and cost:

* ``solve_unit``        unit weights; keep the ``L`` best elements of ``S2``.
* ``solve_partition``   arbitrary weights; cut ``S2`` into budget-sized parts.
* ``solve_enumeration`` arbitrary weights; guess the two most profitable
  elements of an optimum, then fill the residual problem by density.

All solvers treat the last budget of the instance as the active constraint
and expect the oracle to enforce the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .core import (
    FeasibleApprox,
    OracleHandle,
    ProblemInstance,
    Solution,
    Trace,
    as_fraction,
    best_of,
    find_lambda_pair,
    trivial_solution,
)
from .errors import PreconditionError

ENUMERATION_DEPTH = 2


def unit_bound(r, eps) -> Fraction:
    return Fraction(r) / (1 + Fraction(r)) - Fraction(eps)


def partition_bound(r, eps) -> Fraction:
    return Fraction(r) / (1 + 2 * Fraction(r)) - Fraction(eps)


def enumeration_bound(r, eps) -> Fraction:
    return Fraction(r) / (1 + Fraction(r)) - Fraction(eps)


def _members(inst: ProblemInstance, sol: Solution):
    return [inst.element(i) for i in sol.member_ids]


def select_top_L(inst: ProblemInstance, s2: Solution, L) -> Solution:
    """The ``L`` most profitable members of ``s2`` (ties: smaller id first)."""
    elements = _members(inst, s2)
    if any(e.weights[-1] != 1 for e in elements):
        raise PreconditionError("select_top_L needs unit weights")
    L = as_fraction(L, "L")
    if L.denominator != 1:
        raise PreconditionError("select_top_L needs an integral budget")
    if len(elements) < L:
        raise PreconditionError("s2 has fewer than L members")
    ranked = sorted(elements, key=lambda e: (-e.profit, e.id))
    return Solution.of(inst, [e.id for e in ranked[: int(L)]])


def greedy_partition(inst: ProblemInstance, s2: Solution, L) -> list:
    """Split ``s2`` into disjoint parts of weight at most ``L``.

    Elements are taken in ascending id order; a part is closed as soon as the
    next element would overflow it.
    """
    L = as_fraction(L, "L")
    parts = []
    current, load = [], Fraction(0)
    for e in _members(inst, s2):
        w = e.weights[-1]
        if w > L:
            raise PreconditionError(f"element {e.id!r} has weight {w} > L = {L}")
        if current and load + w > L:
            parts.append(current)
            current, load = [], Fraction(0)
        current.append(e.id)
        load += w
    if current or not parts:
        parts.append(current)
    return [Solution.of(inst, p) for p in parts]


def _density_key(e):
    w = e.weights[-1]
    # zero-weight elements come first
    density = (0, Fraction(0)) if w == 0 else (1, -Fraction(e.profit) / w)
    return (*density, e.id)


def density_fill(inst: ProblemInstance, s2: Solution, budget) -> Solution:
    """Add members of ``s2`` by decreasing profit/weight until one does not fit.

    The density order is computed once up front; for a linear objective this
    is the same as re-selecting the densest remaining element each round.
    The scan stops at the first rejected element.
    """
    budget = as_fraction(budget, "budget")
    taken, load = [], Fraction(0)
    for e in sorted(_members(inst, s2), key=_density_key):
        if load + e.weights[-1] > budget:
            break
        taken.append(e.id)
        load += e.weights[-1]
    return Solution.of(inst, taken)


def first_rejected(inst: ProblemInstance, s2: Solution, budget):
    """The element at which ``density_fill`` stops, or ``None``."""
    budget = as_fraction(budget, "budget")
    load = Fraction(0)
    for e in sorted(_members(inst, s2), key=_density_key):
        if load + e.weights[-1] > budget:
            return e.id
        load += e.weights[-1]
    return None


@dataclass(frozen=True)
class ResidualInstance:
    """What remains of ``base`` once ``committed`` is fixed in the solution.

    ``instance`` holds only elements that can join ``committed`` and whose
    profit is at most ``profit_cap``; every budget is reduced by the weight
    of ``committed``.
    """

    base: ProblemInstance
    committed: tuple
    residual_budget: Fraction
    profit_cap: Optional[Fraction]
    instance: ProblemInstance


def residual_instance(inst: ProblemInstance, committed) -> ResidualInstance:
    committed = tuple(sorted(committed))
    structure, kept = inst.structure.residual(committed, inst.ids)
    cap = None
    if committed:
        cap = Fraction(inst.profit_of(committed)) / len(committed)
        kept = [i for i in kept if inst.element(i).profit <= cap]
    budgets = tuple(L - inst.weight_of(committed, c) for c, L in enumerate(inst.budgets))
    if any(b < 0 for b in budgets):
        raise PreconditionError("committed set exceeds the budget")
    keep = set(kept)
    elements = tuple(e for e in inst.elements if e.id in keep)
    residual = ProblemInstance(elements, structure.restrict(keep), budgets, inst.epsilon)
    return ResidualInstance(inst, committed, budgets[-1], cap, residual.stripped())


def _prepare(inst: ProblemInstance, eps):
    if inst.d < 1:
        raise PreconditionError("instance needs at least one budget")
    eps = inst.epsilon if eps is None else as_fraction(eps, "eps")
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    return inst.stripped(), eps


def solve_unit(inst: ProblemInstance, oracle: OracleHandle, eps=None, *, trace: Optional[Trace] = None) -> Solution:
    """``(r/(r+1) - eps)``-approximation for unit-weight instances.

    Returns the better of the within-budget relaxed solution and the ``L``
    most profitable members of the over-budget one.
    """
    inst, eps = _prepare(inst, eps)
    if any(e.weights[-1] != 1 for e in inst.elements):
        raise PreconditionError("solve_unit needs unit weights on the active constraint")
    trivial = trivial_solution(inst)
    if trivial is not None:
        return trivial
    L = Fraction(int(inst.budgets[-1]))
    result = find_lambda_pair(oracle, inst, L, eps, trace=trace)
    if isinstance(result, FeasibleApprox):
        return result.solution
    return best_of([result.sol_hi, select_top_L(inst, result.sol_lo, L)])


def solve_partition(inst: ProblemInstance, oracle: OracleHandle, eps=None, *, trace: Optional[Trace] = None) -> Solution:
    """``(r/(2r+1) - eps)``-approximation for arbitrary weights.

    Returns the better of the within-budget relaxed solution and the most
    profitable part of a greedy partition of the over-budget one.
    """
    inst, eps = _prepare(inst, eps)
    trivial = trivial_solution(inst)
    if trivial is not None:
        return trivial
    L = inst.budgets[-1]
    result = find_lambda_pair(oracle, inst, L, eps, trace=trace)
    if isinstance(result, FeasibleApprox):
        return result.solution
    return best_of([result.sol_hi, *greedy_partition(inst, result.sol_lo, L)])


def enumeration_seeds(inst: ProblemInstance):
    """Every committed set of size at most 2 that is feasible and fits."""
    yield ()
    for k in range(1, ENUMERATION_DEPTH + 1):
        for combo in combinations(inst.ids, k):
            if inst.is_feasible(combo):
                yield combo


def solve_enumeration(inst: ProblemInstance, oracle: OracleHandle, eps=None, *, trace: Optional[Trace] = None) -> Solution:
    """``(r/(1+r) - eps)``-approximation for arbitrary weights.

    For every feasible committed set ``T`` with ``|T| <= 2`` the residual
    problem is solved by the lambda search; ``T`` is combined with the
    within-budget solution and with a density fill of the over-budget one.
    The best candidate overall is returned.
    """
    inst, eps = _prepare(inst, eps)
    trivial = trivial_solution(inst)
    if trivial is not None:
        return trivial
    candidates = []
    for committed in enumeration_seeds(inst):
        res = residual_instance(inst, committed)
        sub = res.instance
        if trace is not None:
            trace.tag = "T=" + ",".join(map(str, committed))
        if not len(sub):
            candidates.append(Solution.of(inst, committed))
            continue
        result = find_lambda_pair(oracle, sub, res.residual_budget, eps, trace=trace)
        if isinstance(result, FeasibleApprox):
            candidates.append(Solution.of(inst, committed + result.solution.member_ids))
            continue
        candidates.append(Solution.of(inst, committed + result.sol_hi.member_ids))
        filled = density_fill(sub, result.sol_lo, res.residual_budget)
        candidates.append(Solution.of(inst, committed + filled.member_ids))
    if trace is not None:
        trace.tag = ""
    return best_of(candidates)
