"""Independent reference computations for the test-suite.

Everything here is a plain bitmask scan over all subsets, written without
touching the search code in ``lagsel.reference`` or the oracles.
"""

from fractions import Fraction


def subsets(ids):
    ids = list(ids)
    for mask in range(1 << len(ids)):
        yield tuple(ids[i] for i in range(len(ids)) if mask >> i & 1)


def _profit(inst, ids):
    return sum((Fraction(inst.element(i).profit) for i in ids), Fraction(0))


def _weight(inst, ids, c):
    return sum((inst.element(i).weights[c] for i in ids), Fraction(0))


def scan_opt(inst):
    """Maximum profit over subsets in the domain that satisfy every budget."""
    best = Fraction(0)
    for s in subsets(inst.ids):
        if not inst.structure.feasible(s):
            continue
        if any(_weight(inst, s, c) > L for c, L in enumerate(inst.budgets)):
            continue
        best = max(best, _profit(inst, s))
    return best


def scan_lagrangian(inst, lam, c=-1):
    """``max f(S) - lam * w_c(S)`` over the domain, other budgets enforced."""
    c = range(inst.d)[c]
    best = Fraction(0)
    for s in subsets(inst.ids):
        if not inst.structure.feasible(s):
            continue
        if any(_weight(inst, s, j) > L for j, L in enumerate(inst.budgets) if j != c):
            continue
        best = max(best, _profit(inst, s) - lam * _weight(inst, s, c))
    return best


def scan_domain_opt(inst):
    """Maximum profit over the domain with all budgets ignored."""
    return max(_profit(inst, s) for s in subsets(inst.ids) if inst.structure.feasible(s))


def scan_reopt(rinst):
    """Single pass, lexicographic on (profit desc, transition cost asc)."""
    base = rinst.base
    best = (Fraction(0), 0)
    for s in subsets(base.ids):
        if not base.structure.feasible(s):
            continue
        if any(_weight(base, s, c) > L for c, L in enumerate(base.budgets)):
            continue
        key = (_profit(base, s), -sum(base.element(i).transition_cost for i in s))
        if key > (best[0], -best[1]):
            best = (key[0], -key[1])
    return best


def scan_opt_within_cost(rinst, b):
    """Best profit reachable with transition cost at most ``b``."""
    base = rinst.base
    best = Fraction(0)
    for s in subsets(base.ids):
        if not base.structure.feasible(s):
            continue
        if any(_weight(base, s, c) > L for c, L in enumerate(base.budgets)):
            continue
        if sum(base.element(i).transition_cost for i in s) <= b:
            best = max(best, _profit(base, s))
    return best
