from fractions import Fraction as F

import pytest

from helpers import scan_opt
from lagsel.converters import solve_enumeration
from lagsel.core import Element, ProblemInstance
from lagsel.errors import PreconditionError
from lagsel.multiconstraint import (
    MAX_CONSTRAINTS,
    integral_profits,
    level_ratios,
    multi_bound,
    naive_bound,
    naive_weights,
    solve_multi,
    solve_multi_naive,
)
from lagsel.problems import FreeStructure, exact_handle
from lagsel.reference import KINDS, brute_force_opt, random_instance

EPS = F(1, 100)


def test_level_ratios_compose():
    assert level_ratios(1, 2) == [1, F(1, 2), F(1, 3)]
    for r in (F(1), F(1, 2), F(2, 7)):
        for i, ri in enumerate(level_ratios(r, MAX_CONSTRAINTS)):
            assert ri == r / (1 + i * r)


def test_multi_bound_matches_last_level():
    assert multi_bound(1, 2, EPS) == F(1, 3) - EPS
    assert multi_bound(1, 3, 0) == level_ratios(1, 3)[-1]


def test_single_budget_reduces_to_enumeration():
    for seed in range(10):
        inst = random_instance("free", 8, seed)
        assert solve_multi(inst, exact_handle(), EPS) == solve_enumeration(inst, exact_handle(), EPS)


def test_two_budgets_meet_bound_and_all_constraints():
    for seed in range(40):
        inst = random_instance(KINDS[seed % 5], 8, seed, budgets=2)
        sol = solve_multi(inst, exact_handle(), EPS)
        assert inst.is_feasible(sol.member_ids)
        assert sol.profit >= multi_bound(1, 2, EPS) * scan_opt(inst), seed


def test_three_budgets_small():
    for seed in range(4):
        inst = random_instance("free", 6, seed, budgets=3)
        sol = solve_multi(inst, exact_handle(), EPS)
        assert inst.is_feasible(sol.member_ids)
        assert sol.profit >= multi_bound(1, 3, EPS) * brute_force_opt(inst)[1]


def test_too_many_budgets_rejected():
    inst = random_instance("free", 4, 0, budgets=MAX_CONSTRAINTS + 1)
    with pytest.raises(PreconditionError):
        solve_multi(inst, exact_handle(), EPS)


def test_integral_profits_scales_by_common_denominator():
    inst = ProblemInstance(
        (Element(0, F(1, 2), (1,)), Element(1, F(2, 3), (1,))), FreeStructure(), (1,)
    )
    scaled = integral_profits(inst)
    assert [e.profit for e in scaled.elements] == [3, 4]
    assert integral_profits(scaled) is scaled


def test_naive_weights_normalize_each_budget():
    inst = ProblemInstance(
        (Element(0, 5, (2, 9)), Element(1, 3, (4, 3))), FreeStructure(), (8, 12)
    )
    reduced = naive_weights(inst)
    assert reduced.budgets == (1,)
    assert [e.weights[0] for e in reduced.elements] == [F(3, 4), F(1, 2)]


def test_naive_baseline_meets_its_bound():
    for seed in range(40):
        inst = random_instance(KINDS[seed % 5], 8, seed, budgets=2)
        sol = solve_multi_naive(inst, exact_handle(), EPS)
        assert inst.is_feasible(sol.member_ids)
        assert sol.profit >= naive_bound(1, 2, EPS) * scan_opt(inst), seed


def test_recursive_bound_beats_naive_bound():
    for d in range(2, MAX_CONSTRAINTS + 1):
        for r in (F(1), F(1, 2), F(1, 5)):
            assert multi_bound(r, d, 0) > naive_bound(r, d, 0)
