"""Hypothesis properties across modules."""

from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from lagsel.converters import solve_enumeration, solve_partition, solve_unit
from lagsel.core import LambdaPair, find_lambda_pair
from lagsel.io import parse_instance, serialize_instance
from lagsel.problems import exact_handle, price_lagrangian
from lagsel.reference import KINDS, random_instance
from lagsel.reopt import reopt_solve

EPS = F(1, 50)
kinds = st.sampled_from(KINDS)
seeds = st.integers(0, 100_000)


@given(kinds, st.integers(1, 9), seeds, st.data())
def test_domain_is_closed_under_subsets(kind, size, seed, data):
    inst = random_instance(kind, size, seed)
    members = data.draw(st.lists(st.sampled_from(inst.ids), unique=True))
    if inst.structure.feasible(members):
        sub = data.draw(st.lists(st.sampled_from(members), unique=True)) if members else []
        assert inst.structure.feasible(sub)


@given(kinds, st.integers(2, 9), seeds)
def test_lambda_pair_invariants(kind, size, seed):
    inst = random_instance(kind, size, seed)
    res = find_lambda_pair(exact_handle(), inst, eps=EPS)
    if isinstance(res, LambdaPair):
        res.check_invariants()
        assert res.lambda_hi - res.lambda_lo <= EPS / inst.budgets[0]
        assert inst.in_domain(res.sol_hi.member_ids) and inst.in_domain(res.sol_lo.member_ids)
    else:
        assert inst.is_feasible(res.solution.member_ids)


@given(kinds, st.integers(1, 9), seeds)
def test_solver_outputs_are_feasible(kind, size, seed):
    inst = random_instance(kind, size, seed)
    unit = random_instance(kind, size, seed, "unit")
    assert inst.is_feasible(solve_enumeration(inst, exact_handle(), EPS).member_ids)
    assert inst.is_feasible(solve_partition(inst, exact_handle(), EPS).member_ids)
    assert unit.is_feasible(solve_unit(unit, exact_handle(), EPS).member_ids)


@given(kinds, st.integers(1, 9), seeds, st.fractions(min_value=0, max_value=50))
def test_pricing_drops_negative_profits(kind, size, seed, lam):
    inst = random_instance(kind, size, seed)
    priced = price_lagrangian(inst, lam)
    assert all(e.profit >= 0 for e in priced.elements)
    assert set(priced.ids) == {e.id for e in inst.elements if e.profit - lam * e.weights[-1] >= 0}
    assert priced.d == 0


@given(kinds, st.integers(1, 8), seeds)
def test_reopt_output_is_feasible(kind, size, seed):
    r = random_instance(kind, size, seed, reopt=True)
    res = reopt_solve(r, exact_handle(), EPS)
    assert r.base.is_feasible(res.solution.member_ids)
    assert res.solution.transition_cost <= res.chosen_budget <= r.b_max


@given(kinds, st.integers(0, 12), seeds, st.integers(1, 3))
def test_serialize_parse_identity(kind, size, seed, budgets):
    inst = random_instance(kind, size, seed, budgets=budgets)
    text = serialize_instance(inst)
    assert parse_instance(text).instance == inst
    assert serialize_instance(parse_instance(text).instance) == text
