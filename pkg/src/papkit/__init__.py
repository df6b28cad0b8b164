"""papkit: optimal implementable hypothesis tests under selective reporting.

A toolkit for designing pre-analysis plans: finite testing instances,
implementability checks, worst-case completion of pre-registered tests,
the power-maximizing linear program over the testing polytope,
extremality diagnostics, and Gaussian power/case-study experiments.
"""

from .checks import (
    ViolationReport,
    Witness,
    analyst_best_subset,
    analyst_choose_plan,
    best_response_table,
    check_monotonicity,
    check_size_control,
    check_truthful_message,
    worst_case_completion,
)
from .discretize import CellTable, ModelError, discretize_gaussian
from .extremal import (
    DeltaTable,
    ExtremalReport,
    PreconditionError,
    check_extremal_conditions,
    extremality_oracle,
    polytope_violation,
    rationalizing_prior,
)
from .grid import Grid
from .lp import (
    InfeasibleError,
    LpProblem,
    LpSolution,
    PapSolution,
    build_lp,
    interim_expected_power,
    known_j_lr_test,
    optimal_pap,
    solve_lp,
)
from .model import (
    AvailabilityModel,
    DiscreteProblem,
    InterimPrior,
    build_interim_prior,
    marginalize,
)
from .rules import IncompleteRuleError, TestRuleTable
from .simplex import SimplexResult, solve_simplex
from .subsets import (
    InstanceTooLargeError,
    enumerate_subsets,
    full_mask,
    is_subset,
    mask_size,
    members,
    restrict,
    submasks,
)

__version__ = "0.1.0"
