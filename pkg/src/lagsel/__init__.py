"""Lagrangian relaxation solvers for budgeted subset selection.

Given an r-approximation oracle for the unbudgeted problem, ``lagsel``
builds approximations for the problem with one or more linear budgets and
for budgeted reoptimization.  All arithmetic is exact (``fractions``).
"""

from .converters import (
    density_fill,
    enumeration_bound,
    greedy_partition,
    partition_bound,
    residual_instance,
    select_top_L,
    solve_enumeration,
    solve_partition,
    solve_unit,
    unit_bound,
)
from .core import (
    Branch,
    Element,
    FeasibleApprox,
    LambdaPair,
    OracleHandle,
    ProblemInstance,
    Solution,
    TheoremViolation,
    Trace,
    check_theorem_guarantee,
    find_lambda_pair,
    lagrangian_value,
    search_call_bound,
)
from .errors import (
    LagselError,
    OracleContractError,
    PreconditionError,
    SchemaError,
    SizeCapExceeded,
)
from .multiconstraint import level_ratios, multi_bound, solve_multi, solve_multi_naive
from .reopt import ReoptInstance, ReoptResult, budgeted_solve, reopt_solve

__all__ = [
    "Branch",
    "Element",
    "FeasibleApprox",
    "LagselError",
    "LambdaPair",
    "OracleContractError",
    "OracleHandle",
    "PreconditionError",
    "ProblemInstance",
    "ReoptInstance",
    "ReoptResult",
    "SchemaError",
    "SizeCapExceeded",
    "Solution",
    "TheoremViolation",
    "Trace",
    "budgeted_solve",
    "check_theorem_guarantee",
    "density_fill",
    "enumeration_bound",
    "find_lambda_pair",
    "greedy_partition",
    "lagrangian_value",
    "level_ratios",
    "multi_bound",
    "partition_bound",
    "reopt_solve",
    "residual_instance",
    "search_call_bound",
    "select_top_L",
    "solve_enumeration",
    "solve_multi",
    "solve_multi_naive",
    "solve_partition",
    "solve_unit",
    "unit_bound",
]

__version__ = "0.1.0"
