"""Subset selection under several linear budgets.

Budgets are peeled off from the last one backwards.  The solver for the
first ``i`` budgets runs ``solve_enumeration`` on budget ``i``, and its
relaxation oracle is the solver for the first ``i - 1`` budgets applied to
the instance with budget ``i`` priced into the profits.  At the bottom sits
the caller's oracle for the problem with no budget at all.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .converters import enumeration_bound, solve_enumeration
from .core import (
    Element,
    OracleHandle,
    ProblemInstance,
    Solution,
    Trace,
    as_fraction,
)
from .errors import PreconditionError
from .problems.oracles import price_lagrangian

MAX_CONSTRAINTS = 4


def level_ratios(r, d: int) -> list:
    """Declared ratios ``r_0 = r``, ``r_i = r_{i-1} / (1 + r_{i-1})``."""
    ratios = [Fraction(r)]
    for _ in range(d):
        ratios.append(ratios[-1] / (1 + ratios[-1]))
    return ratios


def multi_bound(r, d: int, eps) -> Fraction:
    r = Fraction(r)
    return r / (1 + d * r) - Fraction(eps)


def integral_profits(inst: ProblemInstance) -> ProblemInstance:
    """Rescale profits by their common denominator so they become integers.

    Scaling the objective leaves every approximation ratio unchanged and
    restores the ``OPT >= 1`` premise of the lambda search on priced
    instances.
    """
    den = 1
    for e in inst.elements:
        q = Fraction(e.profit).denominator
        den = den * q // math.gcd(den, q)
    if den == 1:
        return inst
    elements = tuple(
        Element(e.id, Fraction(e.profit) * den, e.weights, e.transition_cost)
        for e in inst.elements
    )
    return ProblemInstance(elements, inst.structure, inst.budgets, inst.epsilon)


def _relaxed_level(solve_lower, ratio, name) -> OracleHandle:
    """Oracle for ``i`` budgets built from a solver for the first ``i - 1``."""

    def solver(inst, lam):
        priced = price_lagrangian(inst, lam)
        positive = [e.id for e in priced.elements if e.profit > 0]
        priced = integral_profits(priced.restrict(positive))
        picked = solve_lower(priced)
        return Solution.of(inst, picked.member_ids)

    return OracleHandle(name, ratio, solver)


def solve_multi(
    inst: ProblemInstance,
    base_oracle: OracleHandle,
    eps=None,
    *,
    trace: Optional[Trace] = None,
) -> Solution:
    """``(r/(1+d*r) - eps)``-approximation under ``d`` budgets.

    ``base_oracle`` solves the problem with every budget priced out.  The
    error budget is split evenly, ``eps / d`` per level.
    """
    d = inst.d
    if not 1 <= d <= MAX_CONSTRAINTS:
        raise PreconditionError(f"solve_multi supports 1..{MAX_CONSTRAINTS} budgets, got {d}")
    eps = inst.epsilon if eps is None else as_fraction(eps, "eps")
    level_eps = eps / d
    ratios = level_ratios(base_oracle.declared_ratio, d)

    oracle = base_oracle
    for level in range(1, d):
        def solve_level(priced, oracle=oracle):
            return solve_enumeration(priced, oracle, level_eps)

        oracle = _relaxed_level(solve_level, ratios[level], f"level-{level}")
    return solve_enumeration(inst, oracle, level_eps, trace=trace)


def naive_weights(inst: ProblemInstance) -> ProblemInstance:
    """Collapse ``d`` budgets to one: ``w_e = max_i w_i(e) / L_i`` with ``L = 1``."""
    elements = []
    for e in inst.stripped().elements:
        # after stripping, a zero budget only carries zero weights
        w = max(
            (x / L if L > 0 else Fraction(0) for x, L in zip(e.weights, inst.budgets)),
            default=Fraction(0),
        )
        elements.append(Element(e.id, e.profit, (w,), e.transition_cost))
    ids = {e.id for e in elements}
    return ProblemInstance(tuple(elements), inst.structure.restrict(ids), (Fraction(1),), inst.epsilon)


def solve_multi_naive(
    inst: ProblemInstance,
    base_oracle: OracleHandle,
    eps=None,
    *,
    trace: Optional[Trace] = None,
) -> Solution:
    """Baseline: one max-normalized budget, then ``solve_enumeration``.

    Declared ratio ``rho / d`` where ``rho = r/(1+r) - eps`` is the
    single-budget guarantee.
    """
    if not 1 <= inst.d <= MAX_CONSTRAINTS:
        raise PreconditionError(f"solve_multi_naive supports 1..{MAX_CONSTRAINTS} budgets")
    reduced = naive_weights(inst)
    picked = solve_enumeration(reduced, base_oracle, eps, trace=trace)
    return Solution.of(inst, picked.member_ids)


def naive_bound(r, d: int, eps) -> Fraction:
    return enumeration_bound(r, eps) / d
