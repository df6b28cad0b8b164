"""Extremality of testing rules and rationalizing priors.

A rule in the testing polytope is extremal iff no nonzero perturbation
table keeps both rule+delta and rule-delta inside the polytope.  The
oracle poses that search as a family of small LPs.  For worst-case
completions there is an equivalent structural test on the full-data
slice: a single intermediate rejection value, carried on positive null
mass, with all intermediate cells linked through shared partial reports
at that value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import worst_case_completion
from .lp import LpProblem, VarDesc, solve_lp
from .model import AvailabilityModel, DiscreteProblem, InterimPrior, build_interim_prior
from .rules import TestRuleTable
from .subsets import enumerate_subsets, full_mask, members, restrict

VALUE_TOL = 1e-9


class PreconditionError(ValueError):
    """Raised when a rule does not meet an operation's entry conditions."""


@dataclass(frozen=True)
class DeltaTable:
    """A signed perturbation, one array per availability mask."""

    shape: tuple[int, ...]
    tables: dict[int, np.ndarray]

    def table(self, mask: int) -> np.ndarray:
        return self.tables[mask]

    def max_abs(self) -> float:
        return max(float(np.abs(t).max()) for t in self.tables.values())

    def shifted_rule(self, rule: TestRuleTable, sign: float) -> dict[int, np.ndarray]:
        return {
            mask: rule.table(mask) + sign * self.tables[mask]
            for mask in self.tables
        }


@dataclass(frozen=True)
class ExtremalReport:
    is_extremal: bool
    q: float | None
    violated: int | None            # 1, 2 or 3; None when extremal
    witnesses: tuple = ()
    delta: DeltaTable | None = None

    def to_json_dict(self) -> dict:
        return {
            "is_extremal": self.is_extremal,
            "q": self.q,
            "violated": self.violated,
            "witnesses": [list(map(_plain, w)) for w in self.witnesses],
        }


def _plain(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, tuple):
        return list(map(_plain, v))
    return v


def polytope_violation(
    tables: dict[int, np.ndarray],
    null_table: np.ndarray,
    alpha: float,
    tol: float = VALUE_TOL,
) -> str | None:
    """Why a per-mask table family is outside the testing polytope, if it is."""
    n = null_table.ndim
    full = full_mask(n)
    t = tables[full]
    if np.any(np.asarray(t) < -tol) or np.any(np.asarray(t) > 1.0 + tol):
        return "full-data values leave [0, 1]"
    size = float((t * null_table).sum())
    if size > alpha + tol:
        return f"size {size!r} exceeds alpha {alpha!r}"
    comp = worst_case_completion(np.clip(t, 0.0, 1.0))
    for mask in enumerate_subsets(n):
        if mask == full:
            continue
        arr = np.asarray(tables[mask])
        if np.any(arr < -tol) or np.any(arr > 1.0 + tol):
            return f"mask {mask}: values leave [0, 1]"
        excess = arr - comp.table(mask)
        bad = np.argwhere(excess > tol)
        if len(bad):
            idx = tuple(bad[0])
            return f"mask {mask} cell {idx}: exceeds the worst-case completion bound"
    return None


def _require_completion(rule: TestRuleTable, problem: DiscreteProblem) -> np.ndarray:
    rule.require_complete()
    t = rule.full_table()
    completion = worst_case_completion(t)
    for mask in enumerate_subsets(problem.n):
        got = rule.table(mask)
        want = completion.table(mask)
        bad = np.argwhere(np.abs(got - want) > VALUE_TOL)
        if len(bad):
            idx = tuple(bad[0])
            raise PreconditionError(
                f"rule is not the worst-case completion of its own full-data slice: "
                f"mask {mask}, cell {idx}: value {got[idx]!r} vs completion {want[idx]!r}"
            )
    return t


def _cluster_levels(values: np.ndarray, tol: float = VALUE_TOL) -> list[float]:
    levels: list[float] = []
    for v in np.sort(np.unique(values)):
        if not levels or v - levels[-1] > tol:
            levels.append(float(v))
    return levels


def check_extremal_conditions(rule: TestRuleTable, problem: DiscreteProblem) -> ExtremalReport:
    """Structural extremality test for worst-case completions.

    Conditions: (1) the full-data test takes values in {0, q, 1} for at
    most one intermediate q; (2) the q-cells carry positive null mass;
    (3) every q-cell is linked to every other through chains of shared
    partial reports whose completion value is q.
    """
    t = _require_completion(rule, problem)
    levels = _cluster_levels(t)
    inter = [v for v in levels if VALUE_TOL < v < 1.0 - VALUE_TOL]

    if len(inter) > 1:
        return ExtremalReport(False, None, violated=1, witnesses=tuple((v,) for v in inter))
    if not inter:
        return ExtremalReport(True, None, violated=None)

    q = inter[0]
    q_cells = [tuple(i) for i in np.argwhere(np.abs(t - q) <= VALUE_TOL)]
    q_mass = float(sum(problem.null_table[c] for c in q_cells))
    if q_mass <= VALUE_TOL:
        return ExtremalReport(False, q, violated=2, witnesses=tuple((c, 0.0) for c in q_cells[:4]))

    comp = _linked_components(rule, q, q_cells, problem)
    if len(comp) > 1:
        wit = (comp[0][0], comp[1][0])
        return ExtremalReport(False, q, violated=3, witnesses=(wit,))
    return ExtremalReport(True, q, violated=None)


def _linked_components(rule, q, q_cells, problem):
    """Connected components of q-cells under shared q-valued reports."""
    parent = {c: c for c in q_cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    full = problem.full
    for mask in enumerate_subsets(problem.n):
        if mask == full:
            continue
        table = rule.table(mask)
        groups: dict[tuple, list] = {}
        for c in q_cells:
            sub = restrict(c, mask)
            if abs(float(table[sub]) - q) <= VALUE_TOL:
                groups.setdefault(sub, []).append(c)
        for cells in groups.values():
            for other in cells[1:]:
                union(cells[0], other)
    roots: dict = {}
    for c in q_cells:
        roots.setdefault(find(c), []).append(c)
    return list(roots.values())


def extremality_oracle(
    rule: TestRuleTable, problem: DiscreteProblem, alpha: float | None = None
) -> DeltaTable | None:
    """Search for a feasible two-sided perturbation of the rule.

    Returns a nonzero delta with rule+delta and rule-delta both in the
    testing polytope, or None when the rule is extremal.  Each
    coordinate of delta is maximized in turn subject to the perturbation
    conditions (zero null expectation on the full slice, headroom within
    [0, 1], headroom within the monotonicity gaps); since the feasible
    set is symmetric under negation, all maxima zero means delta == 0 is
    the only feasible point.
    """
    if alpha is None:
        alpha = problem.alpha
    rule.require_complete()
    reason = polytope_violation(
        {m: rule.table(m) for m in enumerate_subsets(problem.n)},
        problem.null_table,
        alpha,
    )
    if reason is not None:
        raise PreconditionError(f"rule is not in the testing polytope: {reason}")

    full = problem.full
    shape = problem.grid.shape
    slots = [VarDesc(full, idx) for idx in np.ndindex(*shape)]
    for mask in enumerate_subsets(problem.n):
        if mask == full:
            continue
        slots.extend(VarDesc(mask, idx) for idx in np.ndindex(*problem.grid.subshape(mask)))
    index = {(s.mask, s.x): k for k, s in enumerate(slots)}
    nvars = len(slots)
    ncells = int(np.prod(shape))

    headroom = np.empty(nvars)
    for k, s in enumerate(slots):
        v = float(rule.table(s.mask)[s.x])
        headroom[k] = max(min(v, 1.0 - v), 0.0)

    row_cols = [np.arange(ncells)]
    row_coefs = [problem.null_table.reshape(-1).copy()]
    senses = ["=="]
    rhs = [0.0]
    t = rule.full_table()
    for cell_k, idx in enumerate(np.ndindex(*shape)):
        for mask in enumerate_subsets(problem.n):
            if mask == full:
                continue
            sub = tuple(idx[i] for i in members(mask))
            gap = max(float(t[idx] - rule.table(mask)[sub]), 0.0)
            cols = np.array([index[(mask, sub)], cell_k])
            row_cols.append(cols)
            row_coefs.append(np.array([1.0, -1.0]))
            senses.append("<=")
            rhs.append(gap)
            row_cols.append(cols)
            row_coefs.append(np.array([-1.0, 1.0]))
            senses.append("<=")
            rhs.append(gap)

    base = LpProblem(
        objective=np.zeros(nvars),
        row_cols=row_cols,
        row_coefs=row_coefs,
        senses=senses,
        rhs=np.array(rhs),
        lb=-headroom,
        ub=headroom.copy(),
        variables=slots,
    )

    for k in range(nvars):
        if headroom[k] <= VALUE_TOL:
            continue
        objective = np.zeros(nvars)
        objective[k] = 1.0
        base.objective = objective
        sol = solve_lp(base)
        if sol.status == "optimal" and sol.objective > 10 * VALUE_TOL:
            tables = {
                mask: np.zeros(problem.grid.subshape(mask))
                for mask in enumerate_subsets(problem.n)
            }
            for s, v in zip(slots, sol.x):
                tables[s.mask][s.x] = v
            return DeltaTable(shape=shape, tables=tables)
    return None


def rationalizing_prior(
    rule: TestRuleTable, problem: DiscreteProblem, alpha: float | None = None
) -> InterimPrior:
    """Interim prior under which a binding deterministic rule is optimal.

    The prior lives on full availability and reweights the null cell
    mass by 2-alpha on rejection cells and 1-alpha elsewhere; the total
    is (2-alpha)*alpha + (1-alpha)^2 = 1 exactly when the rule's size
    equals alpha.
    """
    if alpha is None:
        alpha = problem.alpha
    rule.require_complete()
    t = rule.full_table()
    p0 = problem.null_table

    off = np.argwhere((p0 > 0.0) & (np.abs(t) > VALUE_TOL) & (np.abs(t - 1.0) > VALUE_TOL))
    if len(off):
        idx = tuple(off[0])
        raise PreconditionError(
            f"full-data slice must be 0/1 on null support; cell {idx} has value {t[idx]!r}"
        )
    size = float((t * p0).sum())
    if abs(size - alpha) > VALUE_TOL:
        raise PreconditionError(f"size must bind at alpha={alpha!r}; measured size {size!r}")

    reject = np.abs(t - 1.0) <= VALUE_TOL
    table = np.where(reject, p0 * (2.0 - alpha), p0 * (1.0 - alpha))
    table = table / table.sum()  # analytically 1 already; exact to fp
    return build_interim_prior(
        [(1.0, table)],
        AvailabilityModel.degenerate(problem.n, problem.full),
        problem.grid,
        signal="rationalizing",
    )
