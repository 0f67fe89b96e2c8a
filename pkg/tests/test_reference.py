import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from conftest import FIXTURES
from helpers import scan_opt, scan_reopt
from lagsel.core import Element, ProblemInstance
from lagsel.errors import PreconditionError, SizeCapExceeded
from lagsel.io import load_instance, load_reopt_instance
from lagsel.problems import FreeStructure, GroupedStructure
from lagsel.reference import (
    KINDS,
    TightnessParams,
    brute_force_opt,
    brute_force_reopt_opt,
    random_instance,
    tightness_family,
)
from lagsel.reopt import ReoptInstance

FROZEN = json.loads((Path(__file__).parent / "data" / "frozen_oracles.json").read_text())


def free(rows, budget):
    return ProblemInstance(
        tuple(Element(i, p, (w,)) for i, (p, w) in enumerate(rows)), FreeStructure(), (budget,)
    )


# --- brute_force_opt ------------------------------------------------------

def test_empty_universe():
    sol, value = brute_force_opt(ProblemInstance((), FreeStructure(), (1,)))
    assert sol.member_ids == () and value == 0


def test_unit_budget_at_least_n_takes_everything():
    inst = free([(3, 1), (5, 1), (2, 1)], 3)
    sol, value = brute_force_opt(inst)
    assert sol.member_ids == (0, 1, 2) and value == 10


def test_small_knapsack():
    inst = free([(6, 3), (5, 2), (5, 2)], 4)
    sol, value = brute_force_opt(inst)
    assert value == 10 and sol.member_ids == (1, 2)


def test_zero_profit_elements_are_skipped():
    inst = free([(0, 1), (4, 1)], 2)
    assert brute_force_opt(inst)[0].member_ids == (1,)


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        brute_force_opt(random_instance("free", 10, 0), cap=5)


@pytest.mark.parametrize("kind", KINDS)
def test_agrees_with_bitmask_scan(kind):
    for seed in range(200):
        inst = random_instance(kind, 4 + seed % 7, seed, "unit" if seed % 2 else "general")
        sol, value = brute_force_opt(inst)
        assert inst.is_feasible(sol.member_ids)
        assert value == scan_opt(inst), seed


@pytest.mark.parametrize("kind", KINDS)
def test_agrees_with_frozen_values(kind):
    for seed, expected in enumerate(FROZEN["random"][kind]):
        assert brute_force_opt(random_instance(kind, 10, seed))[1] == F(expected)


def test_fixture_optima_are_frozen():
    for name, expected in FROZEN["fixtures"].items():
        inst = load_instance(FIXTURES / name).instance
        assert brute_force_opt(inst)[1] == F(expected), name


# --- brute_force_reopt_opt ------------------------------------------------

def test_reopt_single_element():
    inst = ProblemInstance((Element(0, 5, (), 3),), FreeStructure())
    assert brute_force_reopt_opt(ReoptInstance(inst)) == (5, 3)


def test_reopt_prefers_cheaper_optimum():
    inst = ProblemInstance(
        (Element(0, 5, (), 3), Element(1, 5, (), 1)), GroupedStructure({"a": {0}, "b": {1}})
    )
    assert brute_force_reopt_opt(ReoptInstance(inst)) == (5, 1)


def test_reopt_zero_costs():
    r = random_instance("interval", 8, 5, reopt=True)
    base = r.base
    zero = ReoptInstance(
        ProblemInstance(tuple(Element(e.id, e.profit, (), 0) for e in base.elements), base.structure)
    )
    assert brute_force_reopt_opt(zero)[1] == 0


@pytest.mark.parametrize("kind", KINDS)
def test_reopt_agrees_with_scan(kind):
    for seed in range(60):
        r = random_instance(kind, 4 + seed % 6, seed, reopt=True)
        assert brute_force_reopt_opt(r) == scan_reopt(r), seed


def test_reopt_fixture_values_are_frozen():
    for name, (p, d) in FROZEN["reopt_fixtures"].items():
        assert brute_force_reopt_opt(load_reopt_instance(FIXTURES / name)) == (F(p), d)


# --- tightness family -----------------------------------------------------

def test_tightness_metadata():
    fam = tightness_family(TightnessParams(1, 8, F(1, 4)))
    assert (fam.opt_value, fam.cap_value, fam.ell) == (14, 10, 56)
    assert len(fam.instance) == 8 + 1 + 56
    assert fam.ratio_cap == F(5, 7)


def test_tightness_group_sizes():
    fam = tightness_family(TightnessParams(F(1, 2), 7, F(1, 3)))
    assert len(fam.groups["A1"]) == 7 and len(fam.groups["A2"]) == 1
    assert len(fam.groups["A3"]) == fam.ell


@pytest.mark.parametrize("k", [6, 7, 8])
def test_tightness_brute_force_matches_closed_form(k):
    fam = tightness_family(TightnessParams(1, k, F(1, 4)))
    _, value = brute_force_opt(fam.instance, cap=200)
    assert value == fam.opt_value


def test_tightness_ratio_approaches_r_over_one_plus_r():
    r = F(1, 2)
    caps = [tightness_family(TightnessParams(r, k, F(1, 4)), 10_000).ratio_cap for k in (8, 40, 200)]
    assert caps == sorted(caps, reverse=True)
    # k(1 + delta) r / ((k - 1)(1 + r)) tends to (1 + delta) r / (1 + r)
    assert abs(caps[-1] - F(5, 4) * r / (1 + r)) < F(1, 100)


def test_tightness_parameter_validation():
    with pytest.raises(PreconditionError):
        TightnessParams(1, 5, F(1, 4))
    with pytest.raises(PreconditionError):
        TightnessParams(0, 8, F(1, 4))
    with pytest.raises(PreconditionError):
        TightnessParams(1, 8, F(1, 2))


def test_tightness_universe_cap():
    with pytest.raises(PreconditionError, match="delta"):
        tightness_family(TightnessParams(1, 8, F(1, 100)))


# --- random_instance ------------------------------------------------------

def test_generator_is_deterministic():
    for kind in KINDS:
        assert random_instance(kind, 9, 4) == random_instance(kind, 9, 4)
        assert random_instance(kind, 9, 4) != random_instance(kind, 9, 5)


def test_generator_size_and_weights():
    for seed in range(1000):
        kind = KINDS[seed % 5]
        mode = "unit" if seed % 3 == 0 else "general"
        inst = random_instance(kind, 1 + seed % 12, seed, mode)
        assert len(inst) == 1 + seed % 12
        L = inst.budgets[0]
        assert all(0 < e.weights[0] <= L for e in inst.elements)
        assert all(1 <= e.profit <= 100 for e in inst.elements)
        if mode == "unit":
            assert all(e.weights[0] == 1 for e in inst.elements)


def test_generator_reopt_costs():
    r = random_instance("interval", 10, 1, reopt=True)
    assert r.base.d == 0
    assert all(0 <= e.transition_cost <= 10 for e in r.base.elements)


def test_generator_rejects_unknown_kind():
    with pytest.raises(PreconditionError, match="unknown instance kind"):
        random_instance("matroid", 5, 0)
