"""The two-site testing story: five rules and their power curves.

All statistics are independent N(theta, 1); statistic i is observed
with probability p_i.  The five rules compared are the full-data
benchmark, the selective-reporting ("naive") test with the analyst's
best response baked in, the conservative test, the best single-statistic
pre-registered test, and the pre-analysis-plan test that registers the
realized availability set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

RULE_KINDS = ("a1", "a2", "a3", "a4", "a5")

RULE_LABELS = {
    "a1": "optimal full-data test",
    "a2": "naive test",
    "a3": "conservative test",
    "a4": "optimal test without pre-analysis plan",
    "a5": "optimal test with pre-analysis plan",
}

MIN_REPS = 10_000


@dataclass(frozen=True)
class MotivatingConfig:
    n: int
    availability: np.ndarray
    alpha: float = 0.05
    theta_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 3.0, 13))
    reps: int = 100_000
    seed: int = 1

    def __post_init__(self):
        p = np.asarray(self.availability, dtype=float)
        if p.shape != (self.n,):
            raise ValueError(f"need {self.n} availability probabilities")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("availability probabilities must lie in [0, 1]")
        if self.reps < MIN_REPS:
            raise ValueError(f"reps must be at least {MIN_REPS}")
        object.__setattr__(self, "availability", p)
        object.__setattr__(self, "theta_grid", np.asarray(self.theta_grid, dtype=float))

    @property
    def z(self) -> float:
        return float(stats.norm.ppf(1.0 - self.alpha))


@dataclass(frozen=True)
class RuleDescriptor:
    """One testing rule: a vectorized decision plus analytic power if known."""

    kind: str
    label: str
    reject: Callable[[np.ndarray, np.ndarray], np.ndarray]
    analytic_power: Callable[[float], float] | None = None


def make_rule(kind: str, config: MotivatingConfig, single_statistic: int = 0) -> RuleDescriptor:
    """Build one of the five testing rules.

    ``reject(x, j)`` takes draws of shape (reps, n) and availability
    indicators of the same shape and returns per-draw decisions with the
    analyst's best response already applied.
    """
    if kind not in RULE_KINDS:
        raise ValueError(f"unknown rule kind {kind!r}")
    n, z, p = config.n, config.z, config.availability
    sqrt_n = np.sqrt(n)

    if kind == "a1":
        # infeasible benchmark: uses every statistic, observed or not
        return RuleDescriptor(
            kind, RULE_LABELS[kind],
            reject=lambda x, j: x.sum(axis=1) / sqrt_n > z,
            analytic_power=lambda th: float(stats.norm.cdf(sqrt_n * th - z)),
        )

    if kind == "a2":
        # the analyst reports the subset with the largest scaled sum; the
        # best subset of a fixed size is always the top order statistics,
        # so scanning sorted prefixes is an exact best response
        def reject(x, j):
            masked = np.where(j, x, -np.inf)
            top = -np.sort(-masked, axis=1)
            sums = np.cumsum(np.where(np.isfinite(top), top, 0.0), axis=1)
            scaled = np.where(
                np.isfinite(top), sums / np.sqrt(np.arange(1, x.shape[1] + 1)), -np.inf
            )
            return scaled.max(axis=1) > z

        return RuleDescriptor(kind, RULE_LABELS[kind], reject=reject)

    if kind == "a3":
        pk = float(np.prod(p))
        return RuleDescriptor(
            kind, RULE_LABELS[kind],
            reject=lambda x, j: j.all(axis=1) & (x.sum(axis=1) / sqrt_n > z),
            analytic_power=lambda th: pk * float(stats.norm.cdf(sqrt_n * th - z)),
        )

    if kind == "a4":
        i = single_statistic
        return RuleDescriptor(
            kind, RULE_LABELS[kind],
            reject=lambda x, j: j[:, i] & (x[:, i] > z),
            analytic_power=lambda th: float(p[i]) * float(stats.norm.cdf(th - z)),
        )

    # a5: the message registers the realized availability set, and the
    # scaled sum over that set is tested; empty sets never reject
    def reject(x, j):
        k = j.sum(axis=1)
        s = np.where(j, x, 0.0).sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            stat = np.where(k > 0, s / np.sqrt(np.maximum(k, 1)), -np.inf)
        return stat > z

    ps = _subset_pmf(p)

    def analytic(th: float) -> float:
        total = 0.0
        for mask, prob in enumerate(ps):
            size = bin(mask).count("1")
            if size:
                total += prob * float(stats.norm.cdf(np.sqrt(size) * th - z))
        return total

    return RuleDescriptor(kind, RULE_LABELS[kind], reject=reject, analytic_power=analytic)


def _subset_pmf(p: np.ndarray) -> np.ndarray:
    n = len(p)
    pmf = np.ones(1 << n)
    for mask in range(1 << n):
        for i in range(n):
            pmf[mask] *= p[i] if (mask >> i) & 1 else 1.0 - p[i]
    return pmf


@dataclass(frozen=True)
class PowerCurve:
    """Per-rule rejection probabilities along a theta grid.

    ``power`` holds the analytic value where a closed form exists and
    the Monte Carlo estimate otherwise; ``mc`` always holds the raw
    Monte Carlo estimate from shared draws.
    """

    thetas: np.ndarray
    kinds: tuple[str, ...]
    power: np.ndarray       # (len(kinds), len(thetas))
    mc: np.ndarray
    se: np.ndarray
    reps: int
    seed: int

    def row(self, kind: str) -> int:
        return self.kinds.index(kind)

    def csv_rows(self):
        for k, kind in enumerate(self.kinds):
            for t, theta in enumerate(self.thetas):
                yield theta, kind, float(self.power[k, t]), float(self.se[k, t])


def power_curve(kinds, config: MotivatingConfig) -> PowerCurve:
    """Monte Carlo power curves on shared draws, one substream per theta.

    Rules with closed-form power report the analytic value in ``power``;
    every rule's Monte Carlo estimate lands in ``mc``.
    """
    kinds = tuple(kinds)
    if len(config.theta_grid) == 0:
        raise ValueError("theta grid is empty")
    rules = [make_rule(k, config) for k in kinds]
    mc = np.zeros((len(kinds), len(config.theta_grid)))
    power = np.zeros_like(mc)
    for t, theta in enumerate(config.theta_grid):
        rng = np.random.default_rng([config.seed, t])
        x = theta + rng.standard_normal((config.reps, config.n))
        j = rng.random((config.reps, config.n)) < config.availability
        for k, rule in enumerate(rules):
            mc[k, t] = float(rule.reject(x, j).mean())
            power[k, t] = (
                rule.analytic_power(float(theta))
                if rule.analytic_power is not None
                else mc[k, t]
            )
    se = np.sqrt(power * (1.0 - power) / config.reps)
    return PowerCurve(
        thetas=config.theta_grid,
        kinds=kinds,
        power=power,
        mc=mc,
        se=se,
        reps=config.reps,
        seed=config.seed,
    )
