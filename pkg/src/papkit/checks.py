"""Implementability checks and worst-case completion.

A rule is implementable without a pre-analysis message iff it is
monotone in the reported set; with messages it additionally needs the
truthful-message inequalities across signal values.  Pre-registered
full-data tests become implementable rules via worst-case completion:
the decision-maker assumes the least favorable values for anything not
reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .discretize import ModelError
from .model import DiscreteProblem, InterimPrior
from .rules import TestRuleTable
from .subsets import (
    enumerate_subsets,
    full_mask,
    members,
    restrict,
    submasks,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Witness:
    """One reproducible violation: lhs exceeds rhs by slack > tolerance."""

    signal: Hashable
    mask: int
    other: Hashable  # the subset I or the competing signal
    x: tuple[int, ...]
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def to_json_dict(self) -> dict:
        return {
            "signal": self.signal,
            "mask": self.mask,
            "other": self.other,
            "x": list(self.x),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of one implementability or size check."""

    kind: str
    tol: float
    witnesses: tuple[Witness, ...] = ()
    max_value: float | None = None
    argmax: tuple | None = None

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "tol": self.tol,
            "max_value": self.max_value,
            "argmax": list(self.argmax) if self.argmax is not None else None,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
        }


def _broadcast_to_mask(table_i: np.ndarray, inner: int, outer: int) -> np.ndarray:
    """View a table over ``inner`` along the axes of ``outer`` ⊇ ``inner``."""
    outer_stats = members(outer)
    inner_set = set(members(inner))
    expand_at = tuple(k for k, stat in enumerate(outer_stats) if stat not in inner_set)
    return np.expand_dims(table_i, axis=expand_at) if expand_at else table_i


def check_monotonicity(
    rule: TestRuleTable, problem: DiscreteProblem, tol: float = DEFAULT_TOL
) -> ViolationReport:
    """Reporting more can never hurt: b(X_I, I) <= b(X_J, J) for I ⊆ J."""
    rule.require_complete()
    witnesses = []
    for sig in rule.signals:
        for outer in enumerate_subsets(problem.n):
            t_outer = rule.table(outer, sig)
            for inner in submasks(outer):
                if inner == outer:
                    continue
                t_inner = _broadcast_to_mask(rule.table(inner, sig), inner, outer)
                diff = t_inner - t_outer
                bad = np.argwhere(diff > tol)
                for idx in map(tuple, bad):
                    witnesses.append(
                        Witness(
                            signal=sig,
                            mask=outer,
                            other=inner,
                            x=idx,
                            lhs=float(np.broadcast_to(t_inner, t_outer.shape)[idx]),
                            rhs=float(t_outer[idx]),
                        )
                    )
    return ViolationReport(kind="monotonicity", tol=tol, witnesses=tuple(witnesses))


def check_truthful_message(
    rule: TestRuleTable, problem: DiscreteProblem, tol: float = DEFAULT_TOL
) -> ViolationReport:
    """No signal value gains by reporting another signal's slice."""
    rule.require_complete()
    if not rule.has_signal_dimension:
        raise ModelError("rule has no signal dimension; nothing to check")
    for sig in rule.signals:
        problem.prior(sig)  # raises if missing
    power = {
        (claimed, true): interim_power_of_slice(rule, claimed, problem.prior(true))
        for claimed in rule.signals
        for true in rule.signals
    }
    witnesses = []
    for true in rule.signals:
        own = power[(true, true)]
        for claimed in rule.signals:
            if claimed == true:
                continue
            other = power[(claimed, true)]
            if other > own + tol:
                witnesses.append(
                    Witness(signal=true, mask=full_mask(problem.n), other=claimed,
                            x=(), lhs=other, rhs=own)
                )
    return ViolationReport(kind="truthful-message", tol=tol, witnesses=tuple(witnesses))


def interim_power_of_slice(
    rule: TestRuleTable, signal: Hashable, prior: InterimPrior
) -> float:
    """Expected rejection of one signal slice under an interim prior."""
    total = 0.0
    for mask, mass in prior.joint.items():
        total += float((rule.table(mask, signal) * mass).sum())
    return total


def worst_case_completion(t: np.ndarray | TestRuleTable, signal: Hashable = None) -> TestRuleTable:
    """Extend a full-data test to partial reports by worst-case inference.

    b(X_J, J) = min over all grid completions X' with X'_J = X_J of t(X'),
    which is the pointwise-largest monotone rule whose full-data slice is t.
    """
    if isinstance(t, TestRuleTable):
        t = t.full_table(signal)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("full-data test values must lie in [0, 1]")
    n = t.ndim
    tables: dict[int, np.ndarray] = {}
    for mask in enumerate_subsets(n):
        drop = tuple(i for i in range(n) if not (mask >> i) & 1)
        tables[mask] = t.min(axis=drop) if drop else t.copy()
    return TestRuleTable(shape=t.shape, tables={signal: tables})


def check_size_control(
    rule: TestRuleTable,
    problem: DiscreteProblem,
    alpha: float | None = None,
    tol: float = DEFAULT_TOL,
) -> ViolationReport:
    """Conditional size: E_null[b(X_J, J)] <= alpha for every signal and J."""
    rule.require_complete()
    if alpha is None:
        alpha = problem.alpha
    witnesses = []
    max_size, arg = -np.inf, None
    for sig in rule.signals:
        for mask in enumerate_subsets(problem.n):
            size = float((rule.table(mask, sig) * problem.null_marginal(mask)).sum())
            if size > max_size:
                max_size, arg = size, (sig, mask)
            if size > alpha + tol:
                witnesses.append(
                    Witness(signal=sig, mask=mask, other=None, x=(), lhs=size, rhs=alpha)
                )
    return ViolationReport(
        kind="size", tol=tol, witnesses=tuple(witnesses), max_value=max_size, argmax=arg
    )


def analyst_best_subset(
    rule: TestRuleTable,
    x: tuple[int, ...],
    available: int,
    signal: Hashable = None,
) -> tuple[int, float]:
    """Best report I* ⊆ J for a given outcome; smallest mask wins ties."""
    best_mask, best_value = None, -np.inf
    for mask in sorted(submasks(available)):
        value = rule.value(mask, restrict(x, mask), signal)
        if value > best_value + DEFAULT_TOL:
            best_mask, best_value = mask, value
    return best_mask, best_value


def analyst_choose_plan(
    candidates: Sequence[TestRuleTable], prior: InterimPrior
) -> tuple[int, float]:
    """Index of the candidate rule with maximal interim expected power."""
    if not candidates:
        raise ValueError("candidate list is empty")
    best_idx, best_power = 0, -np.inf
    for k, rule in enumerate(candidates):
        rule.require_complete()
        power = interim_power_of_slice(rule, rule.signals[0], prior)
        if power > best_power + DEFAULT_TOL:
            best_idx, best_power = k, power
    return best_idx, best_power


def best_response_table(rule: TestRuleTable, signal: Hashable = None) -> TestRuleTable:
    """Reduced form of a rule under selective reporting.

    Returns the monotone envelope a~(X_J, J) = max over I ⊆ J of the
    rule's value at (X_I, I).
    """
    rule.require_complete()
    n = rule.n
    tables: dict[int, np.ndarray] = {}
    for mask in enumerate_subsets(n):
        best = np.array(rule.table(mask, signal), dtype=float, copy=True)
        for inner in submasks(mask):
            if inner == mask:
                continue
            cand = _broadcast_to_mask(tables.get(inner, rule.table(inner, signal)), inner, mask)
            np.maximum(best, cand, out=best)
        tables[mask] = best
    return TestRuleTable(shape=rule.shape, tables={signal: tables})
