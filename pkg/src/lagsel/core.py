"""Data model, Lagrangian objective and the lambda binary search.

Everything here works in exact arithmetic: profits are ``int`` (or
``Fraction`` for derived instances), weights, budgets and multipliers are
``Fraction``.  Nothing in the solver path touches floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import Callable, Hashable, Iterable, Optional, Sequence, Union

from .errors import (
    InvalidConstraintIndex,
    OracleContractError,
    PreconditionError,
    UnknownElementError,
)

Number = Union[int, Fraction]
ElementId = Hashable

DEFAULT_EPSILON = Fraction(1, 100)


def as_fraction(value, name="value") -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected on purpose.
    """
    if isinstance(value, bool):
        raise PreconditionError(f"{name}: booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"{name}: cannot parse rational {value!r}") from exc
    raise PreconditionError(f"{name}: expected an exact rational, got {type(value).__name__}")


def normalize_number(value: Number) -> Number:
    """Return an int when the rational is integral, else the Fraction."""
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class Element:
    """One atom of the universe.

    ``weights`` holds one entry per budget constraint of the owning instance.
    ``transition_cost`` is only used by reoptimization.
    """

    id: ElementId
    profit: Number
    weights: tuple = ()
    transition_cost: Optional[int] = None

    def __post_init__(self):
        profit = normalize_number(as_fraction(self.profit, f"element {self.id!r} profit"))
        if profit < 0:
            raise PreconditionError(f"element {self.id!r}: profit must be >= 0")
        weights = tuple(as_fraction(w, f"element {self.id!r} weight") for w in self.weights)
        if any(w < 0 for w in weights):
            raise PreconditionError(f"element {self.id!r}: weights must be >= 0")
        cost = self.transition_cost
        if cost is not None:
            if isinstance(cost, bool) or as_fraction(cost).denominator != 1:
                raise PreconditionError(f"element {self.id!r}: transition cost must be an integer")
            cost = int(as_fraction(cost))
            if cost < 0:
                raise PreconditionError(f"element {self.id!r}: transition cost must be >= 0")
        object.__setattr__(self, "profit", profit)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "transition_cost", cost)


@dataclass(frozen=True)
class ProblemInstance:
    """A universe, its feasibility structure and the budget vector.

    Solvers treat the *last* budget as the active constraint.  A relaxation
    oracle called on an instance with budgets ``(L_1, ..., L_i)`` prices
    constraint ``i`` into the objective and must enforce ``L_1..L_{i-1}``
    itself.  Base oracles only accept a single budget.
    """

    elements: tuple
    structure: object
    budgets: tuple = ()
    epsilon: Fraction = DEFAULT_EPSILON
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(sorted(self.elements, key=lambda e: e.id))
        index = {}
        for e in elements:
            if e.id in index:
                raise PreconditionError(f"duplicate element id {e.id!r}")
            index[e.id] = e
        budgets = tuple(as_fraction(b, "budget") for b in self.budgets)
        if any(b < 0 for b in budgets):
            raise PreconditionError("budgets must be >= 0")
        for e in elements:
            if len(e.weights) != len(budgets):
                raise PreconditionError(
                    f"element {e.id!r} has {len(e.weights)} weights for {len(budgets)} budgets"
                )
        eps = as_fraction(self.epsilon, "epsilon")
        if not 0 < eps < 1:
            raise PreconditionError("epsilon must lie in (0, 1)")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "_index", index)
        self.structure.validate(index.keys())

    @property
    def ids(self) -> tuple:
        return tuple(self._index)

    @property
    def d(self) -> int:
        return len(self.budgets)

    @property
    def p_max(self) -> Number:
        return max((e.profit for e in self.elements), default=0)

    def __len__(self):
        return len(self.elements)

    def element(self, eid) -> Element:
        try:
            return self._index[eid]
        except KeyError:
            raise UnknownElementError(f"unknown element id {eid!r}") from None

    def profit_of(self, ids: Iterable) -> Number:
        return sum((self.element(i).profit for i in ids), 0)

    def weight_of(self, ids: Iterable, constraint_index: int = -1) -> Fraction:
        self._check_index(constraint_index)
        return sum((self.element(i).weights[constraint_index] for i in ids), Fraction(0))

    def within_budgets(self, ids: Sequence) -> bool:
        return all(self.weight_of(ids, c) <= L for c, L in enumerate(self.budgets))

    def in_domain(self, ids: Iterable) -> bool:
        ids = list(ids)
        for i in ids:
            self.element(i)
        return self.structure.feasible(ids)

    def is_feasible(self, ids: Sequence) -> bool:
        """Membership in the domain *and* every budget respected."""
        return self.in_domain(ids) and self.within_budgets(ids)

    def _check_index(self, constraint_index: int):
        if not -self.d <= constraint_index < self.d:
            raise InvalidConstraintIndex(
                f"constraint index {constraint_index} invalid for {self.d} budget(s)"
            )

    def restrict(self, ids: Iterable, structure=None) -> "ProblemInstance":
        keep = set(ids)
        elements = tuple(e for e in self.elements if e.id in keep)
        if structure is None:
            structure = self.structure.restrict(keep)
        return ProblemInstance(elements, structure, self.budgets, self.epsilon)

    def with_budgets(self, budgets) -> "ProblemInstance":
        return replace(self, budgets=tuple(budgets))

    def stripped(self) -> "ProblemInstance":
        """Drop elements that violate some budget on their own."""
        keep = [
            e.id
            for e in self.elements
            if all(w <= L for w, L in zip(e.weights, self.budgets))
        ]
        if len(keep) == len(self.elements):
            return self
        return self.restrict(keep)


@dataclass(frozen=True)
class Solution:
    member_ids: tuple
    profit: Number
    weights: tuple
    transition_cost: Optional[int] = None

    @classmethod
    def of(cls, inst: ProblemInstance, ids: Iterable) -> "Solution":
        members = tuple(sorted(set(ids)))
        elements = [inst.element(i) for i in members]
        weights = tuple(
            sum((e.weights[c] for e in elements), Fraction(0)) for c in range(inst.d)
        )
        costs = [e.transition_cost for e in elements]
        if members and all(c is not None for c in costs):
            cost = sum(costs)
        elif not members and all(e.transition_cost is not None for e in inst.elements):
            cost = 0
        else:
            cost = None
        profit = normalize_number(sum((e.profit for e in elements), Fraction(0)))
        return cls(members, profit, weights, cost)

    @classmethod
    def empty(cls, inst: ProblemInstance) -> "Solution":
        return cls.of(inst, ())

    def __len__(self):
        return len(self.member_ids)

    def weight(self, constraint_index: int = -1) -> Fraction:
        if not -len(self.weights) <= constraint_index < len(self.weights):
            raise InvalidConstraintIndex(
                f"constraint index {constraint_index} invalid for {len(self.weights)} weight(s)"
            )
        return self.weights[constraint_index]


def best_of(solutions: Iterable[Solution]) -> Optional[Solution]:
    """Highest profit; ties go to the lexicographically smallest id tuple."""
    best = None
    for sol in solutions:
        if sol is None:
            continue
        if (
            best is None
            or sol.profit > best.profit
            or (sol.profit == best.profit and sol.member_ids < best.member_ids)
        ):
            best = sol
    return best


def lagrangian_value(sol: Solution, lam, constraint_index: int = -1) -> Fraction:
    """Objective of the relaxed problem: profit minus ``lam`` times weight."""
    lam = as_fraction(lam, "lambda")
    return Fraction(sol.profit) - lam * sol.weight(constraint_index)


def default_lambda_max(inst: ProblemInstance) -> Fraction:
    """Smallest safe upper end for the lambda search.

    This is ``p_max`` whenever every positive weight is at least 1.  With
    fractional weights an element can stay profitable above ``p_max``, so the
    largest profit density is used instead.
    """
    bound = Fraction(inst.p_max)
    for e in inst.elements:
        w = e.weights[-1]
        if w > 0:
            bound = max(bound, Fraction(e.profit) / w)
    return bound


@dataclass(frozen=True)
class OracleHandle:
    """An r-approximation algorithm for the Lagrangian relaxation.

    ``solver(inst, lam)`` must return a solution in the domain that also
    respects every budget but the last, and must be deterministic.
    """

    name: str
    declared_ratio: Fraction
    solver: Callable[[ProblemInstance, Fraction], Solution]
    lambda_max: Optional[Callable[[ProblemInstance], Fraction]] = None

    def __post_init__(self):
        r = as_fraction(self.declared_ratio, "declared_ratio")
        if not 0 < r <= 1:
            raise PreconditionError("declared ratio must lie in (0, 1]")
        object.__setattr__(self, "declared_ratio", r)

    def __call__(self, inst: ProblemInstance, lam) -> Solution:
        return self.solver(inst, as_fraction(lam, "lambda"))

    def lambda_max_for(self, inst: ProblemInstance) -> Fraction:
        if self.lambda_max is not None:
            return as_fraction(self.lambda_max(inst), "lambda_max")
        return default_lambda_max(inst)


@dataclass(frozen=True)
class LambdaStep:
    lam: Fraction
    weight: Fraction
    within_budget: bool
    tag: str = ""


@dataclass
class Trace:
    """Per-run recorder of oracle calls and bisection steps."""

    oracle_calls: int = 0
    searches: int = 0
    steps: list = field(default_factory=list)
    tag: str = ""


@dataclass(frozen=True)
class FeasibleApprox:
    """``oracle(0)`` already fits the budget, so it is an r-approximation."""

    solution: Solution
    calls: int = 1
    call_bound: int = 2


@dataclass(frozen=True)
class LambdaPair:
    """Two relaxed solutions straddling the budget at nearby multipliers.

    ``sol_hi`` is computed at ``lambda_hi`` and fits the budget; ``sol_lo``
    at ``lambda_lo`` and exceeds it.
    """

    lambda_hi: Fraction
    sol_hi: Solution
    lambda_lo: Fraction
    sol_lo: Solution
    eps_prime: Fraction
    budget: Fraction
    constraint_index: int = -1
    calls: int = 0
    call_bound: int = 0

    def check_invariants(self):
        """Raise ``OracleContractError`` if a structural invariant fails."""
        c = self.constraint_index
        if not self.lambda_lo <= self.lambda_hi <= self.lambda_lo + self.eps_prime:
            raise OracleContractError("lambda gap exceeds eps'")
        if not self.sol_hi.weight(c) <= self.budget <= self.sol_lo.weight(c):
            raise OracleContractError("solutions do not straddle the budget")


def search_call_bound(lambda_max, budget, eps) -> int:
    """``ceil(log2(lambda_max * L / eps)) + 2``, computed without floats."""
    ratio = Fraction(lambda_max) * Fraction(budget) / Fraction(eps)
    k = 0
    while ratio > 2**k:
        k += 1
    return k + 2


def find_lambda_pair(
    oracle: OracleHandle,
    inst: ProblemInstance,
    L=None,
    eps=None,
    *,
    trace: Optional[Trace] = None,
):
    """Binary search for multipliers whose relaxed solutions straddle ``L``.

    Returns ``FeasibleApprox`` when ``oracle(0)`` already fits, otherwise a
    ``LambdaPair`` with ``lambda_hi - lambda_lo <= eps / L``.  Only the
    endpoint invariant is maintained (low side over budget, high side within
    budget); the weight of ``oracle(lam)`` need not be monotone in ``lam``.
    """
    L = inst.budgets[-1] if L is None else as_fraction(L, "L")
    eps = inst.epsilon if eps is None else as_fraction(eps, "eps")
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    if L < 0:
        raise PreconditionError("budget must be >= 0")
    tag = trace.tag if trace is not None else ""
    calls = 0

    def run(lam):
        nonlocal calls
        calls += 1
        sol = oracle(inst, lam)
        w = sol.weight(-1)
        if trace is not None:
            trace.oracle_calls += 1
            trace.steps.append(LambdaStep(lam, w, w <= L, tag))
        return sol

    if trace is not None:
        trace.searches += 1
    s0 = run(Fraction(0))
    if s0.weight(-1) <= L:
        return FeasibleApprox(s0, calls, 2)
    # some element has 0 < w <= L here, so L > 0
    lam_max = oracle.lambda_max_for(inst)
    bound = search_call_bound(lam_max, L, eps)
    hi, s_hi = lam_max, run(lam_max)
    if s_hi.weight(-1) > L:
        raise OracleContractError(
            f"oracle {oracle.name!r}: w(A(lambda_max)) = {s_hi.weight(-1)} exceeds L = {L}; "
            "lambda_max precondition violated"
        )
    lo, s_lo = Fraction(0), s0
    eps_prime = eps / L
    while hi - lo > eps_prime:
        mid = (lo + hi) / 2
        s = run(mid)
        if s.weight(-1) <= L:
            hi, s_hi = mid, s
        else:
            lo, s_lo = mid, s
    if calls > bound:
        raise OracleContractError(f"binary search used {calls} calls, bound is {bound}")
    return LambdaPair(hi, s_hi, lo, s_lo, eps_prime, L, -1, calls, bound)


class Branch(enum.Enum):
    S1_GOOD = "S1_GOOD"
    S2_GOOD = "S2_GOOD"
    BOTH = "BOTH"


@dataclass(frozen=True)
class TheoremViolation:
    """Neither branch of the two-solution guarantee held."""

    alpha: Fraction
    r: Fraction
    eps: Fraction
    opt_value: Number
    f_hi: Number
    f_lo: Number
    branch1_rhs: Fraction
    branch2_rhs: Fraction

    def __bool__(self):
        return False


def check_theorem_guarantee(pair: LambdaPair, alpha, r, eps, opt_value):
    """Report which solution of ``pair`` carries the approximation guarantee.

    Branch 1: ``f(S1) >= alpha * r * OPT``.
    Branch 2: ``f(S2) >= (1 - alpha - eps) * OPT * w(S2) / L``.
    Returns a ``TheoremViolation`` record (falsy) if neither holds.
    """
    alpha, r, eps = (as_fraction(x) for x in (alpha, r, eps))
    if not 1 - r <= alpha <= 1:
        raise PreconditionError("alpha must lie in [1 - r, 1]")
    if opt_value < 1:
        raise PreconditionError("optimum must be at least 1")
    rhs1 = alpha * r * opt_value
    rhs2 = (1 - alpha - eps) * opt_value * pair.sol_lo.weight(pair.constraint_index) / pair.budget
    ok1 = pair.sol_hi.profit >= rhs1
    ok2 = pair.sol_lo.profit >= rhs2
    if ok1 and ok2:
        return Branch.BOTH
    if ok1:
        return Branch.S1_GOOD
    if ok2:
        return Branch.S2_GOOD
    return TheoremViolation(
        alpha, r, eps, opt_value, pair.sol_hi.profit, pair.sol_lo.profit, rhs1, rhs2
    )


def trivial_solution(inst: ProblemInstance) -> Optional[Solution]:
    """Handle instances whose optimum is below 1.

    Returns the best feasible singleton (or the empty solution) when no
    feasible single element has profit >= 1, otherwise ``None``.
    """
    singles = [
        Solution.of(inst, (e.id,))
        for e in inst.elements
        if inst.is_feasible((e.id,))
    ]
    if any(s.profit >= 1 for s in singles):
        return None
    return best_of([Solution.empty(inst), *singles])
