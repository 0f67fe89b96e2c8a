"""Ground-truth solvers and instance generators used by the test-suite."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Element, ProblemInstance, Solution, as_fraction, best_of
from .errors import PreconditionError, SizeCapExceeded
from .problems.oracles import size_cap
from .problems.structures import (
    FreeStructure,
    GapStructure,
    GraphStructure,
    GroupedStructure,
    IntervalStructure,
    Placement,
    Slot,
)
from .reopt import ReoptInstance

KINDS = ("interval", "gap", "graph", "free", "grouped")


def _fractional_bound(items, capacity):
    """Fractional-knapsack value of ``items`` = [(profit, weight)]."""
    total = Fraction(0)
    free = []
    for p, w in items:
        if w == 0:
            total += p
        else:
            free.append((p, w))
    free.sort(key=lambda pw: pw[0] / pw[1], reverse=True)
    for p, w in free:
        if w <= capacity:
            total += p
            capacity -= w
        else:
            total += p * capacity / w
            break
    return total


def _search(inst: ProblemInstance, accept, floor, *, ties=True, chosen=(), pool=None):
    """Depth-first search over positive-profit subsets with a fractional upper bound.

    ``accept(ids, profit)`` sees each surviving leaf and returns True to stop
    the search.  A branch is cut when its bound falls below ``floor()``, or
    reaches it when ``ties`` is False.  ``chosen`` is forced in; only ids in
    ``pool`` are added to it.  Returns True when ``accept`` stopped the search.
    """
    order = [
        e for e in sorted(inst.elements, key=lambda e: (-e.profit, e.id))
        if e.profit > 0 and e.id not in chosen and (pool is None or e.id in pool)
    ]
    structure = inst.structure
    budgets = inst.budgets
    chosen = list(chosen)
    stop = False

    def dfs(i, profit, loads):
        nonlocal stop
        rest = [
            e for e in order[i:]
            if structure.can_extend(chosen, e.id)
            and all(loads[c] + e.weights[c] <= L for c, L in enumerate(budgets))
        ]
        if budgets:
            optimistic = min(
                _fractional_bound([(Fraction(e.profit), e.weights[c]) for e in rest], L - loads[c])
                for c, L in enumerate(budgets)
            )
        else:
            optimistic = sum((Fraction(e.profit) for e in rest), Fraction(0))
        bound, target = profit + optimistic, floor()
        if bound < target or (not ties and bound <= target):
            return
        if i == len(order):
            stop = bool(accept(tuple(sorted(chosen)), profit))
            return
        e = order[i]
        new = [loads[c] + e.weights[c] for c in range(len(budgets))]
        if structure.can_extend(chosen, e.id) and all(x <= L for x, L in zip(new, budgets)):
            chosen.append(e.id)
            dfs(i + 1, profit + e.profit, new)
            chosen.pop()
            if stop:
                return
        dfs(i + 1, profit, loads)

    loads = [sum((inst.element(x).weights[c] for x in chosen), Fraction(0)) for c in range(len(budgets))]
    dfs(0, sum((Fraction(inst.element(x).profit) for x in chosen), Fraction(0)), loads)
    return stop


def brute_force_opt(inst: ProblemInstance, cap=None):
    """Exact optimum of the budgeted problem: ``(solution, value)``.

    Every budget is enforced.  Zero-profit elements are never selected; ties
    go to the lexicographically smallest id tuple.  The value is found first
    with tie pruning, then the tuple is rebuilt one position at a time.
    """
    limit = size_cap(cap)
    if len(inst) > limit:
        raise SizeCapExceeded(len(inst), limit, "brute_force_opt")
    best = {"profit": Fraction(0)}

    def improve(ids, profit):
        best["profit"] = max(best["profit"], profit)

    _search(inst, improve, lambda: best["profit"], ties=False)
    target = best["profit"]
    positive = sorted(e.id for e in inst.elements if e.profit > 0)
    prefix = []
    while inst.profit_of(prefix) < target:
        for x in positive:
            if prefix and x <= prefix[-1]:
                continue
            if not inst.is_feasible(prefix + [x]):
                continue
            pool = {y for y in positive if y > x}
            if _search(inst, lambda ids, p: p >= target, lambda: target, chosen=prefix + [x], pool=pool):
                prefix.append(x)
                break
        else:  # pragma: no cover
            raise AssertionError("optimal value found but no set reaches it")
    sol = Solution.of(inst, prefix)
    return sol, sol.profit


def brute_force_reopt_opt(inst: ReoptInstance, cap=None):
    """``(p(O), delta(OPT))``: best profit, then least transition cost among optima."""
    _, target = brute_force_opt(inst.base, cap)
    if target == 0:
        return 0, 0
    best = {"cost": None}

    def accept(ids, profit):
        if profit == target:
            cost = sum(inst.base.element(i).transition_cost for i in ids)
            if best["cost"] is None or cost < best["cost"]:
                best["cost"] = cost

    _search(inst.base, accept, lambda: target)
    return target, best["cost"]


@dataclass(frozen=True)
class TightnessParams:
    """``r`` in (0, 1], integer ``k > 1/r + 4``, ``delta`` in (0, 1/2)."""

    r: Fraction
    k: int
    delta: Fraction

    def __post_init__(self):
        r = as_fraction(self.r, "r")
        delta = as_fraction(self.delta, "delta")
        if not 0 < r <= 1:
            raise PreconditionError("r must lie in (0, 1]")
        if not isinstance(self.k, int) or not self.k > 1 / r + 4:
            raise PreconditionError("k must be an integer greater than 1/r + 4")
        if not 0 < delta < Fraction(1, 2):
            raise PreconditionError("delta must lie in (0, 1/2)")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "delta", delta)

    @property
    def ell(self) -> int:
        return math.ceil((1 + self.r) * (self.k - 1) / (self.delta * self.r))


@dataclass(frozen=True)
class TightnessInstance:
    params: TightnessParams
    instance: ProblemInstance
    opt_value: Fraction
    cap_value: Fraction
    ell: int
    groups: dict

    @property
    def ratio_cap(self) -> Fraction:
        return self.cap_value / self.opt_value


def tightness_family(params: TightnessParams, max_universe: int = 256) -> TightnessInstance:
    """Three-group instance where combining relaxed solutions loses ``r/(1+r)``.

    Group A1 holds ``k-1`` elements of profit ``1/r`` plus one of profit
    ``k-1``; A2 a single element of profit ``k + delta``; A3 holds ``ell``
    elements of profit ``1 + delta``.  Unit weights, budget ``k``, and a set
    is feasible when it stays inside one group.
    """
    r, k, delta, ell = params.r, params.k, params.delta, params.ell
    size = k + 1 + ell
    if size > max_universe:
        raise PreconditionError(
            f"tightness instance would have {size} elements (cap {max_universe}); raise delta"
        )
    one = (Fraction(1),)
    elements = [Element(i, 1 / r, one) for i in range(k - 1)]
    elements.append(Element(k - 1, k - 1, one))
    elements.append(Element(k, k + delta, one))
    elements += [Element(k + 1 + j, 1 + delta, one) for j in range(ell)]
    groups = {
        "A1": frozenset(range(k)),
        "A2": frozenset({k}),
        "A3": frozenset(range(k + 1, size)),
    }
    inst = ProblemInstance(tuple(elements), GroupedStructure(groups), (Fraction(k),))
    opt = (k - 1) * (1 + r) / r
    cap = k * (1 + delta)
    return TightnessInstance(params, inst, Fraction(opt), Fraction(cap), ell, groups)


def random_instance(
    kind: str,
    size: int,
    seed: int,
    weight_mode: str = "general",
    reopt: bool = False,
    *,
    budgets: int = 1,
    density: float = 0.3,
    activities: Optional[int] = None,
):
    """Seeded instance of ``size`` elements.

    Profits are drawn from [1, 100], weights from [1, L] (or all 1 in unit
    mode) and transition costs from [0, 10].  With ``reopt`` the result is a
    ``ReoptInstance`` whose base instance carries no weight budget.
    """
    if kind not in KINDS:
        raise PreconditionError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
    if weight_mode not in ("unit", "general"):
        raise PreconditionError("weight_mode must be 'unit' or 'general'")
    rng = random.Random(f"{kind}/{size}/{seed}/{weight_mode}/{reopt}/{budgets}/{density}/{activities}")
    ids = list(range(size))
    structure = _random_structure(kind, ids, rng, density, activities)
    d = 0 if reopt else budgets
    if weight_mode == "unit":
        limits = [Fraction(rng.randint(1, max(1, size // 2))) for _ in range(d)]
    else:
        limits = [Fraction(rng.randint(10, 30)) for _ in range(d)]
    elements = []
    for i in ids:
        profit = rng.randint(1, 100)
        if weight_mode == "unit":
            weights = tuple(Fraction(1) for _ in range(d))
        else:
            weights = tuple(Fraction(rng.randint(1, int(L))) for L in limits)
        cost = rng.randint(0, 10) if reopt else None
        elements.append(Element(i, profit, weights, cost))
    inst = ProblemInstance(tuple(elements), structure, tuple(limits))
    return ReoptInstance(inst) if reopt else inst


def _random_structure(kind, ids, rng, density, activities):
    n = len(ids)
    if kind == "free":
        return FreeStructure()
    if kind == "interval":
        m = activities if activities is not None else max(1, math.ceil(n / rng.randint(1, 3)))
        horizon = max(4, 2 * n)
        slots = {}
        for i in ids:
            start = rng.randint(0, horizon)
            slots[i] = Slot(f"a{i % m}", start, start + rng.randint(1, 6))
        return IntervalStructure(slots)
    if kind == "gap":
        n_bins = rng.randint(2, 3)
        n_items = max(1, math.ceil(n / n_bins))
        pairs = rng.sample([(it, b) for it in range(n_items) for b in range(n_bins)], n)
        caps = {f"b{b}": rng.randint(5, 15) for b in range(n_bins)}
        placements = {
            i: Placement(f"i{it}", f"b{b}", rng.randint(1, 8)) for i, (it, b) in zip(ids, pairs)
        }
        return GapStructure(caps, placements)
    if kind == "graph":
        edges = {
            frozenset((u, v)) for a, u in enumerate(ids) for v in ids[a + 1:] if rng.random() < density
        }
        return GraphStructure(frozenset(ids), frozenset(edges))
    n_groups = rng.randint(2, 3)
    groups = {f"G{g}": set() for g in range(n_groups)}
    for i in ids:
        groups[f"G{rng.randrange(n_groups)}"].add(i)
        if rng.random() < 0.2:
            groups[f"G{rng.randrange(n_groups)}"].add(i)
    return GroupedStructure(groups)
