"""Relaxation oracles.

Each oracle solves ``max f(S) - lam * w(S)`` over the domain of an instance.
``price_lagrangian`` turns that relaxed problem into a plain instance of the
same plugin with priced profits, so every oracle below is written against an
ordinary (unbudgeted) instance.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from ..core import Element, OracleHandle, ProblemInstance, Solution, as_fraction
from ..errors import PreconditionError, SizeCapExceeded

DEFAULT_SIZE_CAP = 24


def size_cap(override=None) -> int:
    if override is not None:
        return int(override)
    raw = os.environ.get("LAGSEL_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError:
        raise PreconditionError(f"LAGSEL_SIZE_CAP must be an integer, got {raw!r}") from None


def price_lagrangian(inst: ProblemInstance, lam, constraint_index: int = -1) -> ProblemInstance:
    """Price one budget constraint into the profits.

    Each element gets profit ``f(s) - lam * w(s)``; elements whose priced
    profit is negative are dropped.  The result has the priced constraint
    removed from its budget vector and is an instance of the same plugin.
    """
    lam = as_fraction(lam, "lambda")
    if lam < 0:
        raise PreconditionError("lambda must be >= 0")
    c = range(inst.d)[constraint_index]
    keep = []
    for e in inst.elements:
        value = e.profit - lam * e.weights[c]
        if value >= 0:
            weights = e.weights[:c] + e.weights[c + 1:]
            keep.append(Element(e.id, value, weights, e.transition_cost))
    structure = inst.structure.restrict({e.id for e in keep})
    budgets = inst.budgets[:c] + inst.budgets[c + 1:]
    return ProblemInstance(tuple(keep), structure, budgets, inst.epsilon)


def _scaled(values):
    """Scale a list of rationals to integers sharing one denominator."""
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values]


def exact_oracle(priced: ProblemInstance, cap=None) -> Solution:
    """Exact maximizer of total profit over the domain, honoring all budgets.

    Depth-first branch and bound over the positive-profit elements in
    decreasing profit order.  Among maximizers the lexicographically smallest
    sorted id tuple wins.
    """
    limit = size_cap(cap)
    if len(priced) > limit:
        raise SizeCapExceeded(len(priced), limit, "exact oracle")
    cand = sorted((e for e in priced.elements if e.profit > 0), key=lambda e: (-e.profit, e.id))
    n = len(cand)
    values = _scaled([Fraction(e.profit) for e in cand])
    budgets = priced.budgets
    loads_cap = []
    weights = []
    for c, L in enumerate(budgets):
        scaled = _scaled([e.weights[c] for e in cand] + [L])
        weights.append(scaled[:-1])
        loads_cap.append(scaled[-1])
    structure = priced.structure
    ids = [e.id for e in cand]
    m = len(budgets)
    best_val = 0
    best_key = ()
    chosen = []

    def dfs(live, val, loads):
        # ``live``: later candidates that can still join ``chosen`` on their own
        nonlocal best_val, best_key
        if val + sum(values[j] for j in live) < best_val:
            return
        if not live:
            key = tuple(sorted(chosen))
            if val > best_val or key < best_key:
                best_val, best_key = val, key
            return
        i, rest = live[0], live[1:]
        new_loads = [loads[c] + weights[c][i] for c in range(m)]
        chosen.append(ids[i])
        fits = [j for j in rest if all(new_loads[c] + weights[c][j] <= loads_cap[c] for c in range(m))]
        allowed = set(structure.narrow(chosen, [ids[j] for j in fits]))
        kept = [j for j in fits if ids[j] in allowed]
        dfs(kept, val + values[i], new_loads)
        chosen.pop()
        dfs(rest, val, loads)

    start = [
        j for j in range(n)
        if all(weights[c][j] <= loads_cap[c] for c in range(m)) and structure.can_extend([], ids[j])
    ]
    dfs(start, 0, [0] * m)
    return Solution.of(priced, best_key)


def local_ratio_interval_oracle(priced: ProblemInstance) -> Solution:
    """Local-ratio 1/2-approximation for interval scheduling with activities.

    Repeatedly takes the live instance with the earliest end time, subtracts
    its residual profit from everything it conflicts with (itself included)
    and pushes it on a stack; instances whose residual profit drops to zero
    or below die.  Unwinding the stack adds each instance that is compatible
    with those already taken.
    """
    if priced.d:
        raise PreconditionError("local-ratio oracle does not enforce budgets")
    slots = priced.structure.slots
    residual = {e.id: Fraction(e.profit) for e in priced.elements if e.profit > 0}
    stack = []
    while residual:
        pick = min(residual, key=lambda i: (slots[i].end, i))
        amount = residual[pick]
        stack.append(pick)
        for i in list(residual):
            if i == pick or slots[i].conflicts(slots[pick]):
                residual[i] -= amount
                if residual[i] <= 0:
                    del residual[i]
    taken = []
    while stack:
        i = stack.pop()
        if not any(slots[i].conflicts(slots[t]) for t in taken):
            taken.append(i)
    return Solution.of(priced, taken)


def greedy_wis_oracle(priced: ProblemInstance) -> Solution:
    """Greedy weighted independent set: max profit / (residual degree + 1)."""
    if priced.d:
        raise PreconditionError("greedy WIS oracle does not enforce budgets")
    graph = priced.structure
    live = {e.id: Fraction(e.profit) for e in priced.elements if e.profit > 0}
    taken = []
    while live:
        def density(v):
            return live[v] / (sum(1 for u in graph.neighbors(v) if u in live) + 1)

        v = min(live, key=lambda u: (-density(u), u))
        taken.append(v)
        for u in graph.neighbors(v) | {v}:
            live.pop(u, None)
    return Solution.of(priced, taken)


def _lift(base):
    """Wrap a priced-instance oracle into an ``(inst, lam) -> Solution`` solver."""

    def solver(inst, lam):
        picked = base(price_lagrangian(inst, lam))
        return Solution.of(inst, picked.member_ids)

    return solver


def exact_handle(cap=None) -> OracleHandle:
    return OracleHandle("exact", Fraction(1), _lift(lambda p: exact_oracle(p, cap)))


def local_ratio_handle() -> OracleHandle:
    return OracleHandle("local-ratio", Fraction(1, 2), _lift(local_ratio_interval_oracle))


def greedy_wis_handle(inst: ProblemInstance) -> OracleHandle:
    """Greedy WIS declared at ratio ``1 / max_degree`` of ``inst``'s graph."""
    delta = max(inst.structure.max_degree, 1)
    return OracleHandle("greedy-wis", Fraction(1, delta), _lift(greedy_wis_oracle))


ORACLES = ("exact", "local-ratio", "greedy-wis")


def oracle_by_name(name: str, inst: ProblemInstance, cap=None) -> OracleHandle:
    kind = inst.structure.kind
    if name == "exact":
        return exact_handle(cap)
    if name == "local-ratio":
        if kind != "interval":
            raise PreconditionError("local-ratio oracle needs an interval instance")
        return local_ratio_handle()
    if name == "greedy-wis":
        if kind != "graph":
            raise PreconditionError("greedy-wis oracle needs a graph instance")
        return greedy_wis_handle(inst)
    raise PreconditionError(f"unknown oracle {name!r}; choose from {', '.join(ORACLES)}")


def default_epsilon(inst: ProblemInstance, ratio) -> Fraction:
    """Graph instances default to ``ratio / n``; others to the instance value."""
    if inst.structure.kind == "graph" and len(inst) > 1:
        return Fraction(ratio) / len(inst)
    return inst.epsilon
