"""Discretization of multivariate normal distributions onto cell grids.

Diagonal covariances are handled analytically with per-coordinate CDF
differences.  Correlated covariances are binned by seeded Monte Carlo in
fixed-size chunks with per-chunk substreams, so the result is identical
for a given seed no matter how the chunks are processed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

DEFAULT_DRAWS = 1_000_000
_CHUNK = 1 << 15

# Grids built from Gaussian specs clamp their outer edges at +-8 marginal
# standard deviations; the tail mass beyond them goes to the outer cells.
TAIL_CLAMP_SDS = 8.0
MIN_COVERAGE_SDS = 6.0


class ModelError(ValueError):
    """Raised for ill-formed statistical model inputs."""


@dataclass(frozen=True)
class CellTable:
    """A probability table over full grid cells plus any coverage warnings."""

    probs: np.ndarray
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))


def discretize_gaussian(
    means,
    covariance,
    grid,
    draws: int = DEFAULT_DRAWS,
    seed: int = 0,
) -> CellTable:
    """Cell probabilities of N(means, covariance) on ``grid``.

    Mass outside the outermost edges is folded into the boundary cells.
    Returns an exact product-of-CDF-differences table when the covariance
    is diagonal, otherwise a seeded Monte Carlo histogram.
    """
    means = np.asarray(means, dtype=float)
    cov = np.asarray(covariance, dtype=float)
    n = grid.n
    if means.shape != (n,):
        raise ModelError(f"means must have shape ({n},), got {means.shape}")
    if cov.shape != (n, n):
        raise ModelError(f"covariance must have shape ({n},{n}), got {cov.shape}")
    if not np.allclose(cov, cov.T, atol=1e-12):
        raise ModelError("covariance must be symmetric")
    eigmin = np.linalg.eigvalsh(cov).min()
    if eigmin < -1e-10:
        raise ModelError(f"covariance must be positive semi-definite (min eigenvalue {eigmin:.3e})")

    warnings = _coverage_warnings(means, cov, grid)

    if np.allclose(cov - np.diag(np.diag(cov)), 0.0, atol=0.0):
        probs = _diagonal_table(means, np.diag(cov), grid)
    else:
        probs = _mc_table(means, cov, grid, draws, seed)
    return CellTable(probs, tuple(warnings))


def _coverage_warnings(means, cov, grid) -> list[str]:
    out = []
    sds = np.sqrt(np.maximum(np.diag(cov), 0.0))
    for i in range(grid.n):
        lo, hi = grid.edges[i][0], grid.edges[i][-1]
        span = MIN_COVERAGE_SDS * sds[i]
        if means[i] - lo < span or hi - means[i] < span:
            out.append(
                f"statistic {i}: grid edges [{lo:g}, {hi:g}] cover less than "
                f"{MIN_COVERAGE_SDS:g} standard deviations around mean {means[i]:g}"
            )
    return out


def _diagonal_table(means, variances, grid) -> np.ndarray:
    factors = []
    for i in range(grid.n):
        sd = np.sqrt(variances[i])
        e = grid.edges[i].copy()
        # outer cells absorb the tails
        e[0], e[-1] = -np.inf, np.inf
        if sd == 0.0:
            cdf = (e >= means[i]).astype(float)
            cdf[np.isneginf(e)] = 0.0
            cdf[np.isposinf(e)] = 1.0
        else:
            cdf = stats.norm.cdf(e, loc=means[i], scale=sd)
        factors.append(np.diff(cdf))
    table = factors[0]
    for f in factors[1:]:
        table = np.multiply.outer(table, f)
    return table


def _mc_table(means, cov, grid, draws: int, seed: int) -> np.ndarray:
    if draws <= 0:
        raise ModelError("draws must be positive")
    chol = _safe_cholesky(cov)
    shape = grid.shape
    counts = np.zeros(shape, dtype=np.int64)
    inner = [grid.edges[i][1:-1] for i in range(grid.n)]
    n_chunks = -(-draws // _CHUNK)
    for c in range(n_chunks):
        size = min(_CHUNK, draws - c * _CHUNK)
        rng = np.random.default_rng([seed, c])
        z = rng.standard_normal((size, grid.n))
        x = means + z @ chol.T
        flat = np.zeros(size, dtype=np.int64)
        for i in range(grid.n):
            # values beyond the outer edges land in the boundary cells
            flat = flat * shape[i] + np.searchsorted(inner[i], x[:, i], side="right")
        counts += np.bincount(flat, minlength=counts.size).reshape(shape)
    return counts / float(draws)


def _safe_cholesky(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # PSD but singular: shift by a tiny ridge
        ridge = 1e-12 * max(1.0, np.trace(cov))
        return np.linalg.cholesky(cov + ridge * np.eye(cov.shape[0]))
