"""Rectangular grids over the statistic space.

Each statistic gets its own 1-d partition into cells.  A cell is
identified by its index; probability mass beyond the outermost edges is
folded into the first/last cell, so the grid represents the whole real
line with finite edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .subsets import members


@dataclass(frozen=True)
class Grid:
    """Per-statistic cell midpoints and edges.

    ``edges[i]`` has one more entry than ``midpoints[i]``, and midpoints
    lie strictly inside their cells.
    """

    midpoints: tuple[np.ndarray, ...]
    edges: tuple[np.ndarray, ...]
    _shape: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        mids = tuple(np.asarray(m, dtype=float) for m in self.midpoints)
        edgs = tuple(np.asarray(e, dtype=float) for e in self.edges)
        if len(mids) != len(edgs):
            raise ValueError("midpoints and edges must have one entry per statistic")
        for i, (m, e) in enumerate(zip(mids, edgs)):
            if len(e) != len(m) + 1:
                raise ValueError(f"statistic {i}: need len(edges) == len(midpoints) + 1")
            if np.any(np.diff(m) <= 0) or np.any(np.diff(e) <= 0):
                raise ValueError(f"statistic {i}: midpoints and edges must be strictly increasing")
            if np.any(m <= e[:-1]) or np.any(m >= e[1:]):
                raise ValueError(f"statistic {i}: midpoints must lie strictly inside their cells")
        object.__setattr__(self, "midpoints", mids)
        object.__setattr__(self, "edges", edgs)
        object.__setattr__(self, "_shape", tuple(len(m) for m in mids))

    @property
    def n(self) -> int:
        return len(self.midpoints)

    @property
    def shape(self) -> tuple[int, ...]:
        """Number of cells per statistic."""
        return self._shape

    def subshape(self, mask: int) -> tuple[int, ...]:
        """Shape of a table over the statistics in ``mask`` only."""
        return tuple(self._shape[i] for i in members(mask))

    def midpoint_vector(self, mask: int, indices: tuple[int, ...]) -> np.ndarray:
        """Cell-midpoint values for a partial outcome on ``mask``."""
        return np.array(
            [self.midpoints[i][k] for i, k in zip(members(mask), indices)], dtype=float
        )

    @classmethod
    def from_edges(cls, edges: list[np.ndarray]) -> "Grid":
        """Grid with midpoints at cell centers."""
        edgs = [np.asarray(e, dtype=float) for e in edges]
        mids = [0.5 * (e[:-1] + e[1:]) for e in edgs]
        return cls(tuple(mids), tuple(edgs))

    @classmethod
    def regular(cls, n: int, cells: int, lo: float, hi: float) -> "Grid":
        """Same equally-spaced grid on [lo, hi] for each of n statistics."""
        e = np.linspace(lo, hi, cells + 1)
        return cls.from_edges([e] * n)


def iter_cells(shape: tuple[int, ...]):
    """Iterate all full-outcome index tuples of a grid shape in C order."""
    return (tuple(idx) for idx in np.ndindex(*shape))
