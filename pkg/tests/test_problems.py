from fractions import Fraction as F

import pytest

from helpers import scan_lagrangian, subsets
from lagsel.converters import residual_instance
from lagsel.core import Element, ProblemInstance, Solution
from lagsel.errors import PreconditionError, SizeCapExceeded, UnknownElementError
from lagsel.problems import (
    FreeStructure,
    GapStructure,
    GraphStructure,
    GroupedStructure,
    IntervalStructure,
    Placement,
    Slot,
    default_epsilon,
    exact_oracle,
    feasible,
    greedy_wis_oracle,
    local_ratio_interval_oracle,
    oracle_by_name,
    price_lagrangian,
)
from lagsel.reference import KINDS, random_instance


def interval_instance(rows):
    """rows: (profit, activity, start, end)"""
    elements = tuple(Element(i, p, ()) for i, (p, *_rest) in enumerate(rows))
    slots = {i: Slot(a, s, e) for i, (_, a, s, e) in enumerate(rows)}
    return ProblemInstance(elements, IntervalStructure(slots))


def graph_instance(profits, edges):
    elements = tuple(Element(i, p, ()) for i, p in enumerate(profits))
    return ProblemInstance(elements, GraphStructure(frozenset(range(len(profits))), frozenset(map(frozenset, edges))))


# --- feasibility ----------------------------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_empty_set_feasible_everywhere(kind):
    inst = random_instance(kind, 8, 3)
    assert feasible(inst.structure, ())


def test_half_open_touching_intervals_are_compatible():
    s = IntervalStructure({0: Slot("a", 0, 2), 1: Slot("b", 2, 4)})
    assert feasible(s, (0, 1))


def test_overlapping_intervals_conflict():
    s = IntervalStructure({0: Slot("a", 0, 3), 1: Slot("b", 2, 4)})
    assert not feasible(s, (0, 1))


def test_one_instance_per_activity():
    s = IntervalStructure({0: Slot("a", 0, 1), 1: Slot("a", 5, 6)})
    assert not feasible(s, (0, 1))


def test_empty_interval_rejected():
    with pytest.raises(PreconditionError):
        Slot("a", 3, 3)


def test_triangle_pairs_infeasible():
    g = GraphStructure(frozenset({0, 1, 2}), frozenset({frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})}))
    for pair in ((0, 1), (1, 2), (0, 2)):
        assert not feasible(g, pair)
    assert feasible(g, (1,))


def test_gap_item_once_and_capacity():
    g = GapStructure(
        {"b0": 5, "b1": 4},
        {0: Placement("i0", "b0", 3), 1: Placement("i0", "b1", 2), 2: Placement("i1", "b0", 3)},
    )
    assert not feasible(g, (0, 1))  # same item twice
    assert not feasible(g, (0, 2))  # 6 > 5
    assert feasible(g, (1, 2))


def test_grouped_sets_stay_inside_one_group():
    g = GroupedStructure({"A": {0, 1}, "B": {2}})
    assert feasible(g, (0, 1)) and not feasible(g, (1, 2))


def test_unknown_id_is_structured_error():
    s = IntervalStructure({0: Slot("a", 0, 1)})
    with pytest.raises(UnknownElementError):
        feasible(s, (7,))


@pytest.mark.parametrize("kind", KINDS)
def test_domain_is_lower_ideal(kind):
    inst = random_instance(kind, 7, 11)
    for s in subsets(inst.ids):
        if inst.structure.feasible(s):
            for drop in s:
                assert inst.structure.feasible(tuple(x for x in s if x != drop))


# --- price_lagrangian -----------------------------------------------------

def test_zero_lambda_is_identity_on_profits():
    inst = random_instance("gap", 9, 2)
    priced = price_lagrangian(inst, 0)
    assert [(e.id, e.profit) for e in priced.elements] == [(e.id, e.profit) for e in inst.elements]
    assert priced.d == 0


def test_gap_pair_dropped_when_priced_negative():
    inst = ProblemInstance(
        (Element(0, 5, (3,)), Element(1, 9, (1,))),
        GapStructure({"b": 10}, {0: Placement("i0", "b", 1), 1: Placement("i1", "b", 1)}),
        (4,),
    )
    priced = price_lagrangian(inst, 2)
    assert priced.ids == (1,)
    assert priced.element(1).profit == 7
    assert set(priced.structure.placements) == {1}


def test_negative_lambda_rejected():
    with pytest.raises(PreconditionError):
        price_lagrangian(random_instance("free", 4, 0), -1)


@pytest.mark.parametrize("kind", KINDS)
def test_priced_optimum_equals_lagrangian_optimum(kind):
    for seed in range(20):
        inst = random_instance(kind, 9, seed)
        lam = F(seed * 7 % 23, 1 + seed % 4)
        sol = exact_oracle(price_lagrangian(inst, lam))
        lifted = Solution.of(inst, sol.member_ids)
        assert lifted.profit - lam * lifted.weights[0] == scan_lagrangian(inst, lam)


# --- exact oracle ---------------------------------------------------------

def recursive_max(inst):
    """Plain include/exclude recursion, no pruning beyond feasibility."""
    ids = list(inst.ids)

    def go(i, chosen):
        if i == len(ids):
            return sum((F(inst.element(x).profit) for x in chosen), F(0))
        best = go(i + 1, chosen)
        cand = chosen + [ids[i]]
        if inst.structure.feasible(cand) and inst.within_budgets(cand):
            best = max(best, go(i + 1, cand))
        return best

    return go(0, [])


def test_exact_oracle_on_empty_universe():
    inst = ProblemInstance((), FreeStructure())
    assert exact_oracle(inst).member_ids == ()


def test_exact_oracle_single_element():
    inst = ProblemInstance((Element("x", 3, ()),), FreeStructure())
    assert exact_oracle(inst).member_ids == ("x",)


@pytest.mark.parametrize("kind", KINDS)
def test_exact_oracle_matches_recursive_backtracking(kind):
    for seed in range(200):
        inst = price_lagrangian(random_instance(kind, 8, seed), F(seed % 9, 2))
        sol = exact_oracle(inst)
        assert inst.is_feasible(sol.member_ids)
        assert sol.profit == recursive_max(inst), seed


def test_exact_oracle_enforces_remaining_budgets():
    inst = random_instance("free", 8, 5, budgets=2)
    priced = price_lagrangian(inst, 1)
    sol = exact_oracle(priced)
    assert priced.within_budgets(sol.member_ids)
    assert sol.profit == recursive_max(priced)


def test_exact_oracle_tie_break_is_lexicographic():
    inst = ProblemInstance(tuple(Element(i, 4, ()) for i in range(3)), GroupedStructure({"a": {0, 2}, "b": {1, 2}}))
    assert exact_oracle(inst).member_ids == (0, 2)


def test_exact_oracle_size_cap(monkeypatch):
    inst = price_lagrangian(random_instance("free", 10, 0), 0)
    with pytest.raises(SizeCapExceeded, match="heuristic"):
        exact_oracle(inst, cap=5)
    monkeypatch.setenv("LAGSEL_SIZE_CAP", "6")
    with pytest.raises(SizeCapExceeded):
        exact_oracle(inst)


# --- local ratio ----------------------------------------------------------

def test_local_ratio_takes_everything_without_conflicts():
    inst = interval_instance([(3, "a", 0, 1), (4, "b", 1, 2), (5, "c", 2, 3)])
    assert local_ratio_interval_oracle(inst).member_ids == (0, 1, 2)


def test_local_ratio_two_overlapping_instances():
    inst = interval_instance([(10, "a", 0, 4), (6, "b", 2, 3)])
    # [2,3) ends first and is processed first; its profit is subtracted from both
    assert local_ratio_interval_oracle(inst).profit >= 5


def test_local_ratio_respects_activities():
    inst = interval_instance([(5, "a", 0, 1), (5, "a", 3, 4), (2, "b", 5, 6)])
    sol = local_ratio_interval_oracle(inst)
    assert inst.structure.feasible(sol.member_ids)


def test_local_ratio_half_of_exact():
    for seed in range(300):
        inst = random_instance("interval", 4 + seed % 17, seed)
        priced = price_lagrangian(inst, F(seed % 11, 3))
        approx = local_ratio_interval_oracle(priced)
        assert priced.structure.feasible(approx.member_ids)
        assert 2 * approx.profit >= exact_oracle(priced).profit, seed


def test_local_ratio_rejects_budgeted_instance():
    with pytest.raises(PreconditionError):
        local_ratio_interval_oracle(random_instance("interval", 5, 0))


# --- greedy WIS -----------------------------------------------------------

def test_greedy_edgeless_takes_all():
    inst = graph_instance([3, 1, 4], [])
    assert greedy_wis_oracle(inst).member_ids == (0, 1, 2)


def test_greedy_star_takes_leaves():
    inst = graph_instance([1, 10, 10, 10, 10], [(0, i) for i in range(1, 5)])
    assert greedy_wis_oracle(inst).member_ids == (1, 2, 3, 4)


def test_greedy_within_one_over_max_degree():
    for seed in range(300):
        inst = price_lagrangian(random_instance("graph", 4 + seed % 17, seed), 0)
        delta = max(inst.structure.max_degree, 1)
        approx = greedy_wis_oracle(inst)
        assert inst.structure.feasible(approx.member_ids)
        assert delta * approx.profit >= exact_oracle(inst).profit, seed


# --- residual closure and plumbing ----------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_residual_is_same_kind_and_matches_definition(kind):
    for seed in range(15):
        inst = random_instance(kind, 8, seed).stripped()
        for T in [t for t in subsets(inst.ids) if 1 <= len(t) <= 2 and inst.is_feasible(t)]:
            res = residual_instance(inst, T)
            sub = res.instance
            assert sub.structure.kind == kind
            cap = F(inst.profit_of(T)) / len(T)
            expected = {
                s for s in inst.ids
                if s not in T and inst.structure.feasible(T + (s,)) and inst.element(s).profit <= cap
                and inst.element(s).weights[0] <= res.residual_budget
            }
            assert set(sub.ids) == expected
            # the residual domain accepts S exactly when S with T is feasible
            for S in subsets(sub.ids):
                if len(S) <= 3:
                    assert sub.structure.feasible(S) == inst.structure.feasible(S + T)


def test_oracle_by_name_checks_kind():
    with pytest.raises(PreconditionError):
        oracle_by_name("local-ratio", random_instance("graph", 4, 0))
    with pytest.raises(PreconditionError):
        oracle_by_name("greedy-wis", random_instance("interval", 4, 0))
    with pytest.raises(PreconditionError):
        oracle_by_name("simplex", random_instance("free", 4, 0))


def test_graph_default_epsilon_is_ratio_over_n():
    inst = random_instance("graph", 8, 0)
    assert default_epsilon(inst, F(1, 2)) == F(1, 16)
    assert default_epsilon(random_instance("free", 8, 0), 1) == inst.epsilon
