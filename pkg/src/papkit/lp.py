"""The analyst's linear program over the testing polytope.

Variables are the full-data test values t(X) plus one entry b(X_J, J)
per proper availability set and partial outcome.  The feasible set is
the polytope cut out by the size constraint on t, [0, 1] bounds, and
b(X_J, J) <= t(X) for every completion X of X_J; the objective is
interim expected power under one signal's prior.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .checks import check_monotonicity, check_size_control, worst_case_completion
from .discretize import ModelError
from .model import DiscreteProblem, InterimPrior
from .rules import TestRuleTable
from .simplex import SimplexResult, solve_simplex
from .subsets import enumerate_subsets, members

OBJ_TOL = 1e-9


@dataclass(frozen=True)
class VarDesc:
    """What one LP variable means: a (mask, partial outcome) table entry."""

    mask: int
    x: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"b[{self.mask}|{','.join(map(str, self.x))}]"


@dataclass
class LpProblem:
    objective: np.ndarray
    row_cols: list[np.ndarray]
    row_coefs: list[np.ndarray]
    senses: list[str]
    rhs: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    variables: list[VarDesc]

    @property
    def nvars(self) -> int:
        return len(self.objective)

    @property
    def nrows(self) -> int:
        return len(self.rhs)

    def dense_matrix(self) -> np.ndarray:
        a = np.zeros((self.nrows, self.nvars))
        for i, (cols, coefs) in enumerate(zip(self.row_cols, self.row_coefs)):
            a[i, cols] = coefs
        return a

    def to_json_dict(self) -> dict:
        return {
            "objective": self.objective.tolist(),
            "rows": [
                {"cols": cols.tolist(), "coefs": coefs.tolist(), "sense": s, "rhs": float(r)}
                for cols, coefs, s, r in zip(self.row_cols, self.row_coefs, self.senses, self.rhs)
            ],
            "lb": self.lb.tolist(),
            "ub": self.ub.tolist(),
            "variables": [{"mask": v.mask, "x": list(v.x)} for v in self.variables],
        }


@dataclass
class LpSolution:
    status: str
    x: np.ndarray
    objective: float
    basis: np.ndarray
    at_upper: np.ndarray
    iterations: int

    @property
    def basis_hash(self) -> str:
        payload = ",".join(map(str, sorted(self.basis.tolist())))
        payload += "|" + ",".join(map(str, sorted(self.at_upper.tolist())))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": None if np.isnan(self.objective) else float(self.objective),
            "x": self.x.tolist(),
            "iterations": self.iterations,
            "basis_hash": self.basis_hash,
        }


class InfeasibleError(RuntimeError):
    """Raised when an LP that should be solvable comes back without an optimum."""


def lp_variables(problem: DiscreteProblem) -> list[VarDesc]:
    """t(X) entries first (C order), then proper-subset entries by mask."""
    full = problem.full
    out = [VarDesc(full, idx) for idx in np.ndindex(*problem.grid.shape)]
    for mask in enumerate_subsets(problem.n):
        if mask == full:
            continue
        for idx in np.ndindex(*problem.grid.subshape(mask)):
            out.append(VarDesc(mask, idx))
    return out


def build_lp(problem: DiscreteProblem, signal: Hashable, alpha: float | None = None) -> LpProblem:
    """Interim-power LP for one signal on a discrete problem."""
    if alpha is None:
        alpha = problem.alpha
    prior = problem.prior(signal)
    variables = lp_variables(problem)
    index = {(v.mask, v.x): k for k, v in enumerate(variables)}
    nvars = len(variables)
    full = problem.full
    shape = problem.grid.shape
    ncells = int(np.prod(shape))

    objective = np.zeros(nvars)
    for k, v in enumerate(variables):
        objective[k] = float(prior.joint[v.mask][v.x])

    row_cols: list[np.ndarray] = []
    row_coefs: list[np.ndarray] = []
    senses: list[str] = []
    rhs: list[float] = []

    # size control on the full-data slice
    row_cols.append(np.arange(ncells))
    row_coefs.append(problem.null_table.reshape(-1).copy())
    senses.append("<=")
    rhs.append(float(alpha))

    # monotonicity: each partial entry is at most t at every completion
    for cell_k, idx in enumerate(np.ndindex(*shape)):
        for mask in enumerate_subsets(problem.n):
            if mask == full:
                continue
            sub = tuple(idx[i] for i in members(mask))
            row_cols.append(np.array([index[(mask, sub)], cell_k]))
            row_coefs.append(np.array([1.0, -1.0]))
            senses.append("<=")
            rhs.append(0.0)

    return LpProblem(
        objective=objective,
        row_cols=row_cols,
        row_coefs=row_coefs,
        senses=senses,
        rhs=np.array(rhs),
        lb=np.zeros(nvars),
        ub=np.ones(nvars),
        variables=variables,
    )


def solve_lp(lp: LpProblem) -> LpSolution:
    """Vertex solution via the Bland's-rule simplex."""
    res: SimplexResult = solve_simplex(
        lp.objective, lp.dense_matrix(), lp.senses, lp.rhs, lp.lb, lp.ub
    )
    return LpSolution(
        status=res.status,
        x=res.x,
        objective=res.objective,
        basis=res.basis,
        at_upper=res.at_upper,
        iterations=res.iterations,
    )


@dataclass(frozen=True)
class PapSolution:
    """An optimal pre-analysis plan: completed rule, power, solver trace."""

    rule: TestRuleTable
    power: float
    lp_solution: LpSolution = field(repr=False)


def rule_from_lp(problem: DiscreteProblem, lp: LpProblem, x: np.ndarray) -> TestRuleTable:
    """Raw variable values arranged back into per-mask tables."""
    tables: dict[int, np.ndarray] = {}
    for v, value in zip(lp.variables, x):
        sub = problem.grid.subshape(v.mask)
        if v.mask not in tables:
            tables[v.mask] = np.zeros(sub)
        tables[v.mask][v.x] = min(max(value, 0.0), 1.0)
    return TestRuleTable(shape=problem.grid.shape, tables={None: tables})


def optimal_pap(
    problem: DiscreteProblem, signal: Hashable, alpha: float | None = None
) -> PapSolution:
    """Solve the LP and worst-case-complete the optimal full-data test."""
    if alpha is None:
        alpha = problem.alpha
    lp = build_lp(problem, signal, alpha)
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise InfeasibleError(f"LP came back {sol.status}")
    raw = rule_from_lp(problem, lp, sol.x)
    rule = worst_case_completion(raw.full_table())
    assert check_monotonicity(rule, problem, tol=0.0).passed
    assert check_size_control(rule, problem, alpha=alpha).passed
    return PapSolution(rule=rule, power=sol.objective, lp_solution=sol)


def interim_expected_power(
    rule: TestRuleTable, prior: InterimPrior, signal: Hashable = None
) -> float:
    """Expected rejection probability under one interim prior."""
    rule.require_complete()
    total = 0.0
    for mask, mass in prior.joint.items():
        total += float((rule.table(mask, signal) * mass).sum())
    return total


def known_j_lr_test(
    problem: DiscreteProblem, signal: Hashable, alpha: float | None = None
) -> TestRuleTable:
    """Likelihood-ratio test for a signal whose availability set is known.

    Rejects when the interim marginal likelihood of the observed cells
    exceeds kappa times the null likelihood, randomizing on the boundary
    so the conditional size is exactly alpha; other availability sets
    inherit the decision when they contain the known set and never
    reject otherwise.
    """
    if alpha is None:
        alpha = problem.alpha
    prior = problem.prior(signal)
    pmf = prior.availability.pmf()
    known = int(np.argmax(pmf))
    if abs(pmf[known] - 1.0) > 1e-12:
        raise ModelError("known_j_lr_test needs availability concentrated on one set")
    if known == 0:
        raise ModelError("the known availability set is empty; no data ever arrives")

    p_pi = prior.joint[known]
    p_0 = problem.null_marginal(known)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(p_0 > 0.0, p_pi / np.where(p_0 > 0.0, p_0, 1.0), np.inf)
    ratio = np.where((p_0 == 0.0) & (p_pi == 0.0), 0.0, ratio)

    kappa, q = _np_cutoff(ratio.reshape(-1), p_0.reshape(-1), alpha)
    tie = np.isclose(ratio, kappa, rtol=1e-9, atol=1e-12)
    base = np.where(ratio > kappa, 1.0, 0.0)
    base = np.where(tie, q, base)

    tables: dict[int, np.ndarray] = {}
    n = problem.n
    for mask in enumerate_subsets(n):
        sub = problem.grid.subshape(mask)
        if mask & known == known:
            # decision depends on the known coordinates only
            stats_in_mask = members(mask)
            lift = base
            for pos, stat in enumerate(stats_in_mask):
                if not (known >> stat) & 1:
                    lift = np.expand_dims(lift, axis=pos)
            tables[mask] = np.broadcast_to(lift, sub).copy()
        else:
            tables[mask] = np.zeros(sub)
    return TestRuleTable(shape=problem.grid.shape, tables={None: tables})


def _np_cutoff(ratio: np.ndarray, null: np.ndarray, alpha: float) -> tuple[float, float]:
    """Neyman-Pearson cutoff and boundary rejection probability."""
    order = np.argsort(-ratio, kind="stable")
    levels: list[float] = []
    above = 0.0
    mass_at: list[float] = []
    for i in order:
        r = ratio[i]
        if levels and np.isclose(r, levels[-1], rtol=1e-9, atol=1e-12):
            mass_at[-1] += null[i]
        else:
            levels.append(float(r))
            mass_at.append(float(null[i]))
    for level, mass in zip(levels, mass_at):
        if above + mass >= alpha - 1e-15:
            q = 0.0 if mass <= 0.0 else (alpha - above) / mass
            return level, float(min(max(q, 0.0), 1.0))
        above += mass
    # null mass never reaches alpha (possible when some cells carry no mass)
    return levels[-1], 1.0
