"""Dense primal simplex for box-constrained linear programs.

Maximizes c.x subject to A x (<= or =) b and elementwise bounds
l <= x <= u.  A slack variable is appended per row (range [0, inf) for
inequalities, pinned to [0, 0] for equalities), and a phase-1 pass with
artificial variables runs only when the all-at-lower-bound start is
infeasible.

Pivoting uses Bland's rule throughout (smallest eligible variable index
enters; ratio ties resolved by smallest basic variable index), which
makes the walk deterministic and cycle-free.  Optimal solutions are
basic feasible solutions, i.e. vertices of the feasible set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-12

AT_LOWER, AT_UPPER, BASIC = 0, 1, 2


@dataclass
class SimplexResult:
    status: str  # optimal | infeasible | unbounded | iteration-limit
    x: np.ndarray
    objective: float
    basis: np.ndarray            # basic variable index per row (slacks >= n)
    at_upper: np.ndarray         # nonbasic structural variables at upper bound
    iterations: int


def solve_simplex(
    c,
    a,
    senses,
    b,
    lb,
    ub,
    tol: float = FEAS_TOL,
    pivot_tol: float = PIVOT_TOL,
    max_iter: int | None = None,
) -> SimplexResult:
    """Maximize c.x s.t. a x (senses) b, lb <= x <= ub.

    ``senses`` is a sequence of "<=" or "==" strings, one per row.
    """
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    m, n = a.shape if a.size else (len(b), len(c))
    if a.size == 0:
        a = np.zeros((m, n))
    if not (len(c) == n and len(lb) == n and len(ub) == n and len(b) == m == len(senses)):
        raise ValueError("inconsistent problem dimensions")
    if np.any(lb > ub + tol):
        return SimplexResult("infeasible", np.full(n, np.nan), np.nan,
                             np.zeros(0, dtype=int), np.zeros(0, dtype=int), 0)
    for s in senses:
        if s not in ("<=", "=="):
            raise ValueError(f"unsupported constraint sense {s!r}")

    state = _Tableau(c, a, senses, b, lb, ub, tol, pivot_tol)
    if max_iter is None:
        max_iter = 2000 + 50 * (m + state.ntotal)

    status, iters1 = ("optimal", 0)
    if state.needs_phase1:
        status, iters1 = state.run(state.phase1_costs(), max_iter)
        if status != "optimal":
            return state.result(status, iters1)
        if state.infeasibility() > tol:
            return state.result("infeasible", iters1)
        state.finish_phase1()

    status, iters2 = state.run(state.phase2_costs(), max_iter)
    return state.result(status, iters1 + iters2)


class _Tableau:
    """Dense tableau with explicit lower/upper bounds on every variable."""

    def __init__(self, c, a, senses, b, lb, ub, tol, pivot_tol):
        self.tol = tol
        self.pivot_tol = pivot_tol
        m, n = a.shape
        self.m, self.n = m, n
        self.c_struct = c

        slack_ub = np.array([np.inf if s == "<=" else 0.0 for s in senses])
        self.lower = np.concatenate([lb, np.zeros(m)])
        self.upper = np.concatenate([ub, slack_ub])

        # nonbasic structural variables start at a finite bound (lower wins)
        start = np.where(np.isfinite(self.lower[:n]), self.lower[:n],
                         np.where(np.isfinite(self.upper[:n]), self.upper[:n], 0.0))
        self.status = np.full(n + m, AT_LOWER, dtype=np.int8)
        self.status[:n][~np.isfinite(self.lower[:n]) & np.isfinite(self.upper[:n])] = AT_UPPER

        resid = b - a @ start
        slack_ok = (resid >= -tol) & (resid <= slack_ub + tol)
        self.needs_phase1 = bool(np.any(~slack_ok))

        art_rows = np.nonzero(~slack_ok)[0]
        n_art = len(art_rows)
        self.n_art = n_art
        self.art_cols = np.arange(n + m, n + m + n_art)
        self.ntotal = n + m + n_art

        full = np.zeros((m, self.ntotal))
        full[:, :n] = a
        full[np.arange(m), n + np.arange(m)] = 1.0
        self.lower = np.concatenate([self.lower, np.zeros(n_art)])
        self.upper = np.concatenate([self.upper, np.full(n_art, np.inf)])
        self.status = np.concatenate([self.status, np.full(n_art, AT_LOWER, dtype=np.int8)])

        self.basis = n + np.arange(m)
        values = np.clip(resid, 0.0, slack_ub)
        for k, i in enumerate(art_rows):
            excess = resid[i] - np.clip(resid[i], 0.0, slack_ub[i])
            if excess < 0.0:
                # flip the row so the artificial column is +1 and the
                # starting basis matrix is the identity
                full[i] *= -1.0
            full[i, n + m + k] = 1.0
            self.basis[i] = n + m + k
            self.status[n + i] = AT_LOWER
            values[i] = abs(excess)

        self.tab = full  # becomes B^-1 @ full as pivots accumulate
        self.xb = values
        self.status[self.basis] = BASIC
        self.d = np.zeros(self.ntotal)
        self.costs = None

    # -- objective handling -------------------------------------------------

    def phase1_costs(self) -> np.ndarray:
        costs = np.zeros(self.ntotal)
        costs[self.art_cols] = -1.0  # maximize -(sum of artificials)
        return costs

    def phase2_costs(self) -> np.ndarray:
        costs = np.zeros(self.ntotal)
        costs[: self.n] = self.c_struct
        return costs

    def infeasibility(self) -> float:
        total = 0.0
        for i, var in enumerate(self.basis):
            if var >= self.n + self.m:
                total += abs(self.xb[i])
        return total

    def finish_phase1(self):
        """Pin artificials at zero and pivot basic ones out where possible."""
        for col in self.art_cols:
            self.upper[col] = 0.0
        for i in range(self.m):
            if self.basis[i] < self.n + self.m:
                continue
            row = self.tab[i]
            eligible = np.nonzero(np.abs(row[: self.n + self.m]) > self.pivot_tol)[0]
            eligible = [j for j in eligible if self.status[j] != BASIC]
            if eligible:
                q = int(eligible[0])
                direction = 1 if self.status[q] == AT_LOWER else -1
                self._pivot(i, q, delta=0.0, direction=direction)
            # else: redundant row; the artificial stays basic at zero

    # -- simplex iterations --------------------------------------------------

    def _reduced_costs(self, costs):
        cb = costs[self.basis]
        return costs - cb @ self.tab

    def run(self, costs, max_iter) -> tuple[str, int]:
        self.costs = costs
        self.d = self._reduced_costs(costs)
        iters = 0
        while True:
            if iters >= max_iter:
                return "iteration-limit", iters
            entering = self._pick_entering()
            if entering is None:
                return "optimal", iters
            iters += 1
            if iters % 256 == 0:
                self.d = self._reduced_costs(costs)
            status = self._step(entering)
            if status == "unbounded":
                return "unbounded", iters

    def _pick_entering(self):
        usable = self.upper - self.lower > self.pivot_tol
        lo = (self.status == AT_LOWER) & (self.d > self.tol) & usable
        hi = (self.status == AT_UPPER) & (self.d < -self.tol) & usable
        cand = lo | hi
        if not cand.any():
            return None
        return int(np.argmax(cand))  # smallest index: Bland

    def _step(self, q: int) -> str | None:
        direction = 1 if self.status[q] == AT_LOWER else -1
        col = self.tab[:, q].copy()
        move = direction * col

        lb_b = self.lower[self.basis]
        ub_b = self.upper[self.basis]
        ratios = np.full(self.m, np.inf)
        down = move > self.pivot_tol
        ratios[down] = np.maximum(self.xb[down] - lb_b[down], 0.0) / move[down]
        up = (move < -self.pivot_tol) & np.isfinite(ub_b)
        ratios[up] = np.maximum(ub_b[up] - self.xb[up], 0.0) / -move[up]

        own_range = self.upper[q] - self.lower[q]
        row_min = float(ratios.min()) if self.m else np.inf
        best_delta = min(own_range, row_min)
        if not np.isfinite(best_delta):
            return "unbounded"

        if own_range <= row_min + self.pivot_tol and own_range <= best_delta + self.pivot_tol:
            # entering variable flips to its other bound
            self.xb -= move * own_range
            self.status[q] = AT_UPPER if direction == 1 else AT_LOWER
            return None

        # Bland tie-break: among rows within tolerance of the minimum
        # ratio, the one whose basic variable has the smallest index
        ties = np.nonzero(ratios <= row_min + self.pivot_tol)[0]
        leave_row = int(ties[np.argmin(self.basis[ties])])
        self._pivot(leave_row, q, min(row_min, own_range), direction)
        return None

    def _pivot(self, r: int, q: int, delta: float, direction: int):
        col = self.tab[:, q].copy()
        self.xb -= direction * delta * col
        leaving = self.basis[r]
        # the leaving variable lands on the bound it ran into
        self.status[leaving] = AT_LOWER if direction * col[r] > 0 else AT_UPPER
        entering_from = self.lower[q] if direction == 1 else self.upper[q]
        new_val = entering_from + direction * delta

        piv_row = self.tab[r] / self.tab[r, q]
        col[r] = 0.0
        # rank-1 elimination in place; tab.T is the F-ordered view BLAS wants
        dger(-1.0, piv_row, col, a=self.tab.T, overwrite_a=1)
        self.tab[r] = piv_row
        self.d -= self.d[q] * piv_row

        self.basis[r] = q
        self.status[q] = BASIC
        self.xb[r] = new_val

    # -- extraction ----------------------------------------------------------

    def variable_values(self) -> np.ndarray:
        x = np.where(self.status[: self.ntotal] == AT_UPPER, self.upper, self.lower)
        x[~np.isfinite(x)] = 0.0
        x[self.basis] = self.xb
        return x

    def result(self, status: str, iterations: int) -> SimplexResult:
        if status in ("infeasible", "unbounded", "iteration-limit"):
            return SimplexResult(status, np.full(self.n, np.nan), np.nan,
                                 self.basis.copy(), np.zeros(0, dtype=int), iterations)
        x = self.variable_values()[: self.n]
        at_upper = np.nonzero(self.status[: self.n] == AT_UPPER)[0]
        return SimplexResult(
            status="optimal",
            x=x,
            objective=float(self.c_struct @ x),
            basis=self.basis.copy(),
            at_upper=at_upper,
            iterations=iterations,
        )
