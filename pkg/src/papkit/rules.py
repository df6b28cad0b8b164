"""Decision-rule tables b(X_J, J), optionally indexed by a signal.

A rule stores one array per availability mask, over the sub-grid of the
statistics in that mask, so entries can only depend on the reported
coordinates.  A bare full-data test t(X) is the table that holds only
the full mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .subsets import enumerate_subsets, full_mask, members

VALUE_TOL = 1e-9


class IncompleteRuleError(KeyError):
    """Raised when a rule lacks an entry required by an operation."""


@dataclass(frozen=True)
class TestRuleTable:
    """Rejection probabilities keyed by (signal, mask, partial outcome).

    ``tables[signal][mask]`` is an ndarray over ``grid.subshape(mask)``.
    Signal-free rules use the single key ``None``.
    """

    __test__ = False  # not a pytest class despite the name

    shape: tuple[int, ...]
    tables: dict[Hashable, dict[int, np.ndarray]]

    def __post_init__(self):
        n = len(self.shape)
        for sig, per_mask in self.tables.items():
            for mask, arr in per_mask.items():
                arr = np.asarray(arr, dtype=float)
                want = tuple(self.shape[i] for i in members(mask))
                if arr.shape != want:
                    raise ValueError(
                        f"signal {sig!r} mask {mask}: table shape {arr.shape}, expected {want}"
                    )
                if np.any(arr < -VALUE_TOL) or np.any(arr > 1.0 + VALUE_TOL):
                    raise ValueError(f"signal {sig!r} mask {mask}: values outside [0, 1]")
                per_mask[mask] = np.clip(arr, 0.0, 1.0)

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    @property
    def signals(self) -> tuple[Hashable, ...]:
        return tuple(self.tables.keys())

    @property
    def has_signal_dimension(self) -> bool:
        return self.signals != (None,)

    def table(self, mask: int, signal: Hashable = None) -> np.ndarray:
        try:
            per_mask = self.tables[signal]
        except KeyError:
            raise IncompleteRuleError(f"rule has no slice for signal {signal!r}") from None
        try:
            return per_mask[mask]
        except KeyError:
            raise IncompleteRuleError(
                f"rule has no table for mask {mask} (signal {signal!r})"
            ) from None

    def value(self, mask: int, indices: tuple[int, ...], signal: Hashable = None) -> float:
        return float(self.table(mask, signal)[indices])

    def full_table(self, signal: Hashable = None) -> np.ndarray:
        """The full-data slice t(X) = b(X, K)."""
        return self.table(self.full, signal)

    def is_complete(self) -> bool:
        masks = set(enumerate_subsets(self.n))
        return all(set(per_mask) == masks for per_mask in self.tables.values())

    def require_complete(self) -> None:
        for sig, per_mask in self.tables.items():
            missing = set(enumerate_subsets(self.n)) - set(per_mask)
            if missing:
                raise IncompleteRuleError(
                    f"rule is missing masks {sorted(missing)} for signal {sig!r}"
                )

    @classmethod
    def from_full(cls, t: np.ndarray, signal: Hashable = None) -> "TestRuleTable":
        """Wrap a full-data test as a rule holding only the J = K slice."""
        t = np.asarray(t, dtype=float)
        return cls(shape=t.shape, tables={signal: {full_mask(t.ndim): t}})

    @classmethod
    def constant(cls, shape: tuple[int, ...], value: float, signal: Hashable = None) -> "TestRuleTable":
        n = len(shape)
        tables = {
            mask: np.full(tuple(shape[i] for i in members(mask)), float(value))
            for mask in enumerate_subsets(n)
        }
        return cls(shape=shape, tables={signal: tables})

    def with_signal_slices(self, mapping: dict[Hashable, "TestRuleTable"]) -> "TestRuleTable":
        """Combine signal-free rules into one rule with a signal dimension."""
        tables = {}
        for sig, rule in mapping.items():
            if rule.shape != self.shape:
                raise ValueError("all slices must share the grid shape")
            tables[sig] = dict(rule.tables[None])
        return TestRuleTable(shape=self.shape, tables=tables)

    def to_json_dict(self) -> dict:
        signals = None if not self.has_signal_dimension else list(self.signals)
        entries = []
        for sig in self.tables:
            for mask in sorted(self.tables[sig]):
                arr = self.tables[sig][mask]
                for idx in np.ndindex(*arr.shape):
                    entry = {"mask": mask, "x": list(idx), "value": float(arr[idx])}
                    if signals is not None:
                        entry["signal"] = sig
                    entries.append(entry)
        return {"signals": signals, "shape": list(self.shape), "entries": entries}

    @classmethod
    def from_json_dict(cls, data: dict, shape: tuple[int, ...] | None = None) -> "TestRuleTable":
        if shape is None:
            if "shape" not in data:
                raise ValueError("rule JSON lacks a shape and none was supplied")
            shape = tuple(int(s) for s in data["shape"])
        n = len(shape)
        tables: dict[Hashable, dict[int, np.ndarray]] = {}
        for entry in data["entries"]:
            sig = entry.get("signal")
            mask = int(entry["mask"])
            idx = tuple(int(i) for i in entry["x"])
            per_mask = tables.setdefault(sig, {})
            if mask not in per_mask:
                sub = tuple(shape[i] for i in members(mask))
                per_mask[mask] = np.zeros(sub)
            per_mask[mask][idx] = float(entry["value"])
        return cls(shape=shape, tables=tables)


def signal_free(rule: TestRuleTable) -> TestRuleTable:
    """View a one-signal rule as signal-free (key None)."""
    if rule.signals == (None,):
        return rule
    if len(rule.signals) != 1:
        raise ValueError("rule has several signal slices; pick one")
    only = rule.signals[0]
    return TestRuleTable(shape=rule.shape, tables={None: dict(rule.tables[only])})
