"""Shared fixtures and independent oracles for the test suite.

The oracles here stay deliberately naive (explicit enumeration, direct
summation) so they cannot share a failure mode with the library code
they check.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy import stats

from papkit import (
    AvailabilityModel,
    DiscreteProblem,
    Grid,
    TestRuleTable,
    build_interim_prior,
    discretize_gaussian,
)
from papkit.subsets import enumerate_subsets, members


def twocell_problem(alpha: float = 0.05) -> DiscreteProblem:
    """One statistic, two cells: P0(high) = 0.05, prior(high) = 0.5, J = K."""
    z = stats.norm.ppf(0.95)
    grid = Grid.from_edges([np.array([-8.0, z, 8.0])])
    null = np.array([0.95, 0.05])
    prior = build_interim_prior(
        [(1.0, np.array([0.5, 0.5]))],
        AvailabilityModel.degenerate(1, 1),
        grid,
    )
    return DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=alpha)


def sec2_problem(
    cells: int = 32,
    theta: float = 0.3,
    p=(0.9, 0.5),
    alpha: float = 0.05,
    span: float = 8.0,
) -> DiscreteProblem:
    """The two-site testing example, discretized."""
    grid = Grid.regular(2, cells, -span, span)
    null = discretize_gaussian([0.0, 0.0], np.eye(2), grid).probs
    atom = discretize_gaussian([theta, theta], np.eye(2), grid).probs
    prior = build_interim_prior(
        [(1.0, atom)], AvailabilityModel.from_probabilities(p), grid
    )
    return DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=alpha)


def naive_rule(problem: DiscreteProblem, alpha: float = 0.05) -> TestRuleTable:
    """Selective-reporting envelope of per-subset z-tests on the grid.

    The literal rule rejects at (X_I, I) when the |I|^(-1/2)-scaled sum
    of reported midpoints exceeds the one-sided critical value; the
    returned table bakes in the analyst's best reporting response.
    """
    from papkit import best_response_table

    z = stats.norm.ppf(1.0 - alpha)
    grid = problem.grid
    tables = {}
    for mask in enumerate_subsets(problem.n):
        sub = grid.subshape(mask)
        arr = np.zeros(sub)
        if mask:
            axes = members(mask)
            for idx in np.ndindex(*sub):
                mids = [grid.midpoints[i][k] for i, k in zip(axes, idx)]
                arr[idx] = 1.0 if sum(mids) / np.sqrt(len(mids)) > z else 0.0
        tables[mask] = arr
    literal = TestRuleTable(shape=grid.shape, tables={None: tables})
    return best_response_table(literal)


def rule_power_by_summation(rule: TestRuleTable, prior, signal=None) -> float:
    """Direct double sum over (mask, cell) --- the summation oracle."""
    total = 0.0
    for mask in sorted(prior.joint):
        mass = prior.joint[mask]
        table = rule.table(mask, signal)
        for idx in np.ndindex(*mass.shape):
            total += float(table[idx]) * float(mass[idx])
    return total


def enumerate_vertices_best(c, a, senses, b, lb, ub, tol=1e-9):
    """Max of c.x over the polytope by brute-force vertex enumeration.

    Builds every candidate basic solution from n-subsets of active
    constraints (rows and bounds), keeps the feasible ones, and returns
    the best objective.  Only sensible for a handful of variables.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m, n = a.shape
    cons = []  # (row, rhs) for equalities a_i x == rhs when active
    always = []
    for i in range(m):
        if senses[i] == "==":
            always.append((a[i], b[i]))
        else:
            cons.append((a[i], b[i]))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(ub[j]):
            cons.append((e.copy(), ub[j]))
        if np.isfinite(lb[j]):
            cons.append((-e, -lb[j]))

    need = n - len(always)
    best = None
    for chosen in combinations(range(len(cons)), need):
        rows = always + [cons[k] for k in chosen]
        mat = np.array([r for r, _ in rows])
        rhs = np.array([v for _, v in rows])
        if np.linalg.matrix_rank(mat, tol=1e-10) < n:
            continue
        try:
            x = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.any(x < lb - tol) or np.any(x > ub + tol):
            continue
        resid = a @ x - b
        ok = True
        for i in range(m):
            if senses[i] == "==" and abs(resid[i]) > tol:
                ok = False
                break
            if senses[i] == "<=" and resid[i] > tol:
                ok = False
                break
        if not ok:
            continue
        val = float(np.dot(c, x))
        if best is None or val > best:
            best = val
    return best
