"""JSON config parsing for problems, designs, and experiment settings.

Validation errors carry the offending field path so callers (CLI exit
codes, HTTP 422 bodies) can report exactly what was wrong.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np

from .casestudy import GaussianDesign
from .discretize import discretize_gaussian
from .grid import Grid
from .model import AvailabilityModel, DiscreteProblem, build_interim_prior
from .motivating import MotivatingConfig
from .rules import TestRuleTable


class SchemaError(ValueError):
    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        self.message = message
        super().__init__(f"{field_path}: {message}")

    def to_json_dict(self) -> dict:
        return {"code": "schema", "field_path": self.field_path, "message": self.message}


def _need(data: dict, key: str, path: str) -> Any:
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object")
    if key not in data:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return data[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, "expected a number")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "expected an integer")
    return value


def _vector(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(path, "expected a nonempty array of numbers")
    return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(value)])


def _matrix(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(path, "expected a nonempty array of rows")
    rows = [_vector(r, f"{path}[{i}]") for i, r in enumerate(value)]
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise SchemaError(path, "rows have unequal lengths")
    return np.vstack(rows)


def canonical_digest(data) -> str:
    """Stable digest of a JSON-compatible object."""
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


# -- availability ----------------------------------------------------------


def parse_availability(data, n: int, path: str = "availability") -> AvailabilityModel:
    if isinstance(data, list):
        data = {"independent": data}
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object or probability array")
    try:
        if "independent" in data:
            probs = _vector(data["independent"], f"{path}.independent")
            if len(probs) != n:
                raise SchemaError(f"{path}.independent", f"expected {n} probabilities")
            return AvailabilityModel.from_probabilities(probs)
        if "explicit" in data:
            raw = data["explicit"]
            if not isinstance(raw, dict):
                raise SchemaError(f"{path}.explicit", "expected an object keyed by mask")
            pmf = {}
            for key, prob in raw.items():
                try:
                    mask = int(key)
                except ValueError:
                    raise SchemaError(f"{path}.explicit.{key}", "mask keys must be integers")
                if not 0 <= mask < (1 << n):
                    raise SchemaError(f"{path}.explicit.{key}", f"mask out of range for n={n}")
                pmf[mask] = _number(prob, f"{path}.explicit.{key}")
            return AvailabilityModel.from_pmf(n, pmf)
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(path, "expected 'independent' or 'explicit'")


# -- discrete problems -----------------------------------------------------


def parse_grid(statistics, path: str = "statistics") -> Grid:
    if not isinstance(statistics, list) or not statistics:
        raise SchemaError(path, "expected a nonempty array of statistics")
    edges, mids = [], []
    for i, stat in enumerate(statistics):
        e = _vector(_need(stat, "edges", f"{path}[{i}]"), f"{path}[{i}].edges")
        if len(e) < 2:
            raise SchemaError(f"{path}[{i}].edges", "need at least two edges")
        edges.append(e)
        if "midpoints" in stat:
            mids.append(_vector(stat["midpoints"], f"{path}[{i}].midpoints"))
        else:
            mids.append(0.5 * (e[:-1] + e[1:]))
    try:
        return Grid(tuple(mids), tuple(edges))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def _parse_cell_table(data, grid: Grid, mc: dict, path: str) -> np.ndarray:
    if "table" in data:
        arr = np.asarray(data["table"], dtype=float)
        if arr.shape != grid.shape:
            raise SchemaError(f"{path}.table", f"shape {arr.shape} does not match grid {grid.shape}")
        return arr
    if "mean" in data:
        mean = _vector(_need(data, "mean", path), f"{path}.mean")
        cov = _matrix(_need(data, "cov", path), f"{path}.cov")
        try:
            return discretize_gaussian(
                mean, cov, grid, draws=mc["draws"], seed=mc["seed"]
            ).probs
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc
    raise SchemaError(path, "expected 'table' or 'mean'/'cov'")


def parse_problem(data: dict, path: str = "") -> DiscreteProblem:
    prefix = f"{path}." if path else ""
    grid = parse_grid(_need(data, "statistics", path or "config"), f"{prefix}statistics")
    n = grid.n
    mc_raw = data.get("mc", {})
    mc = {
        "draws": _integer(mc_raw.get("draws", 1_000_000), f"{prefix}mc.draws"),
        "seed": _integer(mc_raw.get("seed", 0), f"{prefix}mc.seed"),
    }
    alpha = _number(_need(data, "alpha", path or "config"), f"{prefix}alpha")
    if not 0.0 < alpha < 1.0:
        raise SchemaError(f"{prefix}alpha", "alpha must lie strictly between 0 and 1")

    null = _parse_cell_table(_need(data, "null", path or "config"), grid, mc, f"{prefix}null")
    total = float(null.sum())
    if abs(total - 1.0) > 1e-6:
        null = null / total  # explicit tables may carry rounding slack

    default_avail = None
    if "availability" in data:
        default_avail = parse_availability(data["availability"], n, f"{prefix}availability")

    priors = []
    signals = data.get("signals", [])
    if not isinstance(signals, list):
        raise SchemaError(f"{prefix}signals", "expected an array")
    for k, sig in enumerate(signals):
        spath = f"{prefix}signals[{k}]"
        sid = sig.get("id", k)
        if "availability" in sig:
            avail = parse_availability(sig["availability"], n, f"{spath}.availability")
        elif default_avail is not None:
            avail = default_avail
        else:
            raise SchemaError(f"{spath}.availability", "no availability given here or at top level")
        atoms_raw = _need(sig, "atoms", spath)
        if not isinstance(atoms_raw, list) or not atoms_raw:
            raise SchemaError(f"{spath}.atoms", "expected a nonempty array")
        atoms = []
        for j, atom in enumerate(atoms_raw):
            apath = f"{spath}.atoms[{j}]"
            weight = _number(_need(atom, "weight", apath), f"{apath}.weight")
            atoms.append((weight, _parse_cell_table(atom, grid, mc, apath)))
        try:
            priors.append(build_interim_prior(atoms, avail, grid, signal=sid))
        except ValueError as exc:
            raise SchemaError(spath, str(exc)) from exc

    try:
        return DiscreteProblem(grid=grid, null_table=null, priors=tuple(priors), alpha=alpha)
    except ValueError as exc:
        raise SchemaError(path or "config", str(exc)) from exc


def parse_rule(data: dict, shape=None) -> TestRuleTable:
    if not isinstance(data, dict) or "entries" not in data:
        raise SchemaError("rule", "expected an object with an 'entries' array")
    try:
        return TestRuleTable.from_json_dict(data, shape=shape)
    except (ValueError, KeyError, IndexError) as exc:
        raise SchemaError("rule.entries", str(exc)) from exc


# -- gaussian-lab configs ----------------------------------------------------


def parse_motivating(data: dict) -> MotivatingConfig:
    n = _integer(_need(data, "n", "config"), "n")
    avail = _vector(_need(data, "availability", "config"), "availability")
    alpha = _number(data.get("alpha", 0.05), "alpha")
    theta = data.get("theta_grid", {"start": 0.0, "stop": 3.0, "count": 13})
    if isinstance(theta, dict):
        grid = np.linspace(
            _number(_need(theta, "start", "theta_grid"), "theta_grid.start"),
            _number(_need(theta, "stop", "theta_grid"), "theta_grid.stop"),
            _integer(_need(theta, "count", "theta_grid"), "theta_grid.count"),
        )
    else:
        grid = _vector(theta, "theta_grid")
    reps = _integer(data.get("reps", 100_000), "reps")
    seed = _integer(data.get("seed", 1), "seed")
    try:
        return MotivatingConfig(
            n=n, availability=avail, alpha=alpha, theta_grid=grid, reps=reps, seed=seed
        )
    except ValueError as exc:
        raise SchemaError("config", str(exc)) from exc


def parse_design(data: dict, path: str = "design") -> GaussianDesign:
    mean = _vector(_need(data, "prior_mean", path), f"{path}.prior_mean")
    cov = _matrix(_need(data, "prior_cov", path), f"{path}.prior_cov")
    sds = _vector(_need(data, "arm_sds", path), f"{path}.arm_sds")
    ctrl = _number(_need(data, "control_sd", path), f"{path}.control_sd")
    size = _integer(_need(data, "sample_size", path), f"{path}.sample_size")
    try:
        return GaussianDesign(
            prior_mean=mean, prior_cov=cov, arm_sds=sds, control_sd=ctrl, sample_size=size
        )
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def parse_casestudy(data: dict) -> dict:
    """Case-study request: design, availability, and run settings."""
    design = parse_design(_need(data, "design", "config"))
    avail = parse_availability(
        _need(data, "availability", "config"), design.k, "availability"
    )
    alpha = _number(data.get("alpha", 0.05), "alpha")
    if not 0.0 < alpha < 1.0:
        raise SchemaError("alpha", "alpha must lie strictly between 0 and 1")
    out = {
        "design": design,
        "availability": avail,
        "alpha": alpha,
        "cells": _integer(data.get("cells", 16), "cells"),
        "reps": _integer(data.get("reps", 200_000), "reps"),
        "seed": _integer(data.get("seed", 0), "seed"),
        "eval_reps": _integer(data["eval_reps"], "eval_reps") if "eval_reps" in data else None,
    }
    if "family" in data:
        out["family"] = data["family"]
    if "p1_grid" in data:
        out["p1_grid"] = _vector(data["p1_grid"], "p1_grid")
    if "p2_grid" in data:
        out["p2_grid"] = _vector(data["p2_grid"], "p2_grid")
    return out
