"""Finite problem instances: availability, interim priors, and the null.

The core object is :class:`DiscreteProblem`, which fixes the grid, the
null cell table, the size level, and one interim prior per signal value.
An interim prior stores the joint table P(X_J, J) as one array per
availability mask; the factorization P(J) * sum_theta w * P(X_J | theta)
is built in, so conditional independence of the data from availability
and signal holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .discretize import CellTable, ModelError
from .grid import Grid
from .subsets import enumerate_subsets, full_mask

PMF_TOL = 1e-12
TABLE_TOL = 1e-9


@dataclass(frozen=True)
class AvailabilityModel:
    """Distribution of the availability mask J.

    Either independent per-statistic inclusion probabilities or an
    explicit pmf over all 2^n masks.
    """

    n: int
    independent: np.ndarray | None = None
    explicit: np.ndarray | None = None

    def __post_init__(self):
        if (self.independent is None) == (self.explicit is None):
            raise ModelError("specify exactly one of independent probabilities or explicit pmf")
        if self.independent is not None:
            p = np.asarray(self.independent, dtype=float)
            if p.shape != (self.n,):
                raise ModelError(f"need {self.n} inclusion probabilities, got shape {p.shape}")
            if np.any(p < 0.0) or np.any(p > 1.0):
                raise ModelError("inclusion probabilities must lie in [0, 1]")
            object.__setattr__(self, "independent", p)
        else:
            q = np.asarray(self.explicit, dtype=float)
            if q.shape != (1 << self.n,):
                raise ModelError(f"explicit pmf must have length {1 << self.n}, got {q.shape}")
            if np.any(q < -PMF_TOL):
                raise ModelError("explicit pmf must be nonnegative")
            if abs(q.sum() - 1.0) > PMF_TOL:
                raise ModelError(f"explicit pmf sums to {q.sum()!r}, not 1")
            object.__setattr__(self, "explicit", np.maximum(q, 0.0))

    @classmethod
    def from_probabilities(cls, probs: Sequence[float]) -> "AvailabilityModel":
        probs = np.asarray(probs, dtype=float)
        return cls(n=len(probs), independent=probs)

    @classmethod
    def from_pmf(cls, n: int, pmf: dict[int, float] | np.ndarray) -> "AvailabilityModel":
        if isinstance(pmf, dict):
            q = np.zeros(1 << n)
            for mask, prob in pmf.items():
                q[int(mask)] = prob
        else:
            q = np.asarray(pmf, dtype=float)
        return cls(n=n, explicit=q)

    @classmethod
    def degenerate(cls, n: int, mask: int) -> "AvailabilityModel":
        """All mass on a single availability set."""
        return cls.from_pmf(n, {mask: 1.0})

    def pmf(self) -> np.ndarray:
        """Probability of each mask, indexed by mask value."""
        if self.explicit is not None:
            return self.explicit
        q = np.ones(1 << self.n)
        for mask in enumerate_subsets(self.n):
            for i in range(self.n):
                q[mask] *= self.independent[i] if (mask >> i) & 1 else 1.0 - self.independent[i]
        return q

    def marginals(self) -> np.ndarray:
        """P(i in J) for each statistic i."""
        if self.independent is not None:
            return self.independent
        q = self.pmf()
        return np.array(
            [sum(q[m] for m in range(len(q)) if (m >> i) & 1) for i in range(self.n)]
        )


@dataclass(frozen=True)
class InterimPrior:
    """Analyst posterior given one signal value.

    ``joint[mask]`` is P(X_J = cell, J = mask) over the sub-grid of the
    statistics in ``mask`` (a 0-d array for the empty mask).  ``mixture``
    is the full-data mixture sum_theta w(theta) P(X | theta).
    """

    signal: Hashable
    availability: AvailabilityModel
    mixture: np.ndarray
    joint: dict[int, np.ndarray]

    def total_mass(self) -> float:
        return float(sum(t.sum() for t in self.joint.values()))

    def mask_mass(self, mask: int) -> float:
        return float(self.joint[mask].sum())


def marginalize(table: np.ndarray, mask: int, n: int) -> np.ndarray:
    """Marginal of a full-grid table onto the statistics in ``mask``."""
    drop = tuple(i for i in range(n) if not (mask >> i) & 1)
    return table.sum(axis=drop) if drop else table


def build_interim_prior(
    atoms: Sequence[tuple[float, np.ndarray | CellTable]],
    availability: AvailabilityModel,
    grid: Grid,
    signal: Hashable = 0,
) -> InterimPrior:
    """Assemble P(X_J, J) = P(J) * sum_theta w(theta) P(X_J | theta).

    Each atom is a (weight, full-grid cell table) pair; weights must be
    positive and sum to one.
    """
    if not atoms:
        raise ModelError("need at least one atom")
    weights = np.array([w for w, _ in atoms], dtype=float)
    if np.any(weights <= 0.0):
        raise ModelError("atom weights must be positive")
    if abs(weights.sum() - 1.0) > PMF_TOL:
        raise ModelError(f"atom weights sum to {weights.sum()!r}, not 1")

    n = grid.n
    mixture = np.zeros(grid.shape)
    for w, table in atoms:
        probs = table.probs if isinstance(table, CellTable) else np.asarray(table, dtype=float)
        if probs.shape != grid.shape:
            raise ModelError(f"atom table shape {probs.shape} does not match grid {grid.shape}")
        mixture += w * probs

    pj = availability.pmf()
    joint = {
        mask: pj[mask] * marginalize(mixture, mask, n)
        for mask in enumerate_subsets(n)
    }
    prior = InterimPrior(signal=signal, availability=availability, mixture=mixture, joint=joint)
    total = prior.total_mass()
    if abs(total - 1.0) > TABLE_TOL:
        raise ModelError(f"joint prior table sums to {total!r}, not 1")
    return prior


@dataclass(frozen=True)
class DiscreteProblem:
    """A finite testing instance: grid, null table, priors, size level."""

    grid: Grid
    null_table: np.ndarray
    priors: tuple[InterimPrior, ...]
    alpha: float
    _null_marginals: dict[int, np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        null = np.asarray(self.null_table, dtype=float)
        if null.shape != self.grid.shape:
            raise ModelError(f"null table shape {null.shape} does not match grid {self.grid.shape}")
        if np.any(null < 0.0):
            raise ModelError("null table must be nonnegative")
        if abs(null.sum() - 1.0) > TABLE_TOL:
            raise ModelError(f"null table sums to {null.sum()!r}, not 1")
        if not 0.0 < self.alpha < 1.0:
            raise ModelError(f"alpha must lie in (0, 1), got {self.alpha}")
        seen = set()
        for p in self.priors:
            if p.signal in seen:
                raise ModelError(f"duplicate signal {p.signal!r}")
            seen.add(p.signal)
        object.__setattr__(self, "null_table", null)
        object.__setattr__(
            self,
            "_null_marginals",
            {m: marginalize(null, m, self.n) for m in enumerate_subsets(self.n)},
        )

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def full(self) -> int:
        return full_mask(self.n)

    @property
    def signals(self) -> tuple[Hashable, ...]:
        return tuple(p.signal for p in self.priors)

    def prior(self, signal: Hashable) -> InterimPrior:
        for p in self.priors:
            if p.signal == signal:
                return p
        raise ModelError(f"no interim prior for signal {signal!r}")

    def null_marginal(self, mask: int) -> np.ndarray:
        """Null distribution of X restricted to the statistics in ``mask``."""
        return self._null_marginals[mask]
