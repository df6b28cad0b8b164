"""Stateless JSON-over-HTTP facade for solves, power curves, case studies.

Every response is a pure function of the request body: it carries the
result payload, run diagnostics, and a digest of the canonicalized
request.  Instance-size guards keep requests small enough to answer
synchronously.
"""

from __future__ import annotations

import hashlib
import json
import os
import time

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .casestudy import case_study_power, discretize_design, region_grids
from .discretize import ModelError
from .extremal import check_extremal_conditions
from .lp import InfeasibleError, optimal_pap
from .motivating import MIN_REPS, RULE_KINDS, power_curve
from .schemas import (
    SchemaError,
    parse_casestudy,
    parse_motivating,
    parse_problem,
)

MAX_STATISTICS = 4
MAX_CELLS = 4096


def _error(status: int, code: str, message: str, field_path: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "field_path": field_path, "message": message},
    )


async def _body(request: Request):
    """Parsed JSON body plus the digest of the exact bytes received.

    Hashing raw bytes (rather than a canonical re-serialization) lets
    clients verify the echo against what they actually sent.
    """
    raw = await request.body()
    digest = hashlib.sha256(raw).hexdigest()[:16]
    try:
        return json.loads(raw), digest
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        return _error(400, "malformed-json", str(exc)), digest


def _respond(result: dict, digest: str, started: float, **diag) -> JSONResponse:
    return JSONResponse(
        content={
            "result": result,
            "diagnostics": {"runtime_ms": round(1000 * (time.time() - started), 3), **diag},
            "request_digest": digest,
        }
    )


def create_app() -> FastAPI:
    app = FastAPI(title="papkit service", version=__version__)
    origin = os.environ.get("PAPKIT_CORS_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/v1/solve")
    async def solve(request: Request):
        started = time.time()
        data, digest = await _body(request)
        if isinstance(data, JSONResponse):
            return data
        try:
            problem = parse_problem(data.get("problem", data))
        except SchemaError as exc:
            return _error(422, "schema", exc.message, exc.field_path)
        if problem.n > MAX_STATISTICS:
            return _error(413, "too-large", f"at most {MAX_STATISTICS} statistics, got {problem.n}")
        if int(np.prod(problem.grid.shape)) > MAX_CELLS:
            return _error(413, "too-large", f"at most {MAX_CELLS} full-data cells")
        signal = data.get("signal", problem.signals[0] if problem.signals else None)
        matched = [s for s in problem.signals if str(s) == str(signal)]
        if not matched:
            return _error(422, "schema", f"unknown signal {signal!r}", "signal")
        alpha = data.get("alpha", problem.alpha)
        if not isinstance(alpha, (int, float)) or not 0.0 < float(alpha) < 1.0:
            return _error(422, "schema", "alpha must lie strictly between 0 and 1", "alpha")
        try:
            pap = optimal_pap(problem, signal=matched[0], alpha=float(alpha))
        except InfeasibleError as exc:
            return _error(409, "infeasible", str(exc))
        extremal = check_extremal_conditions(pap.rule, problem)
        return _respond(
            {
                "power": pap.power,
                "rule": pap.rule.to_json_dict(),
                "extremal": extremal.to_json_dict(),
                "solver": {
                    "status": pap.lp_solution.status,
                    "iterations": pap.lp_solution.iterations,
                    "basis_hash": pap.lp_solution.basis_hash,
                },
            },
            digest,
            started,
            iterations=pap.lp_solution.iterations,
        )

    @app.post("/api/v1/power")
    async def power(request: Request):
        started = time.time()
        data, digest = await _body(request)
        if isinstance(data, JSONResponse):
            return data
        kinds = data.get("kinds", list(RULE_KINDS))
        if not isinstance(kinds, list) or not kinds:
            return _error(422, "schema", "kinds must be a nonempty array", "kinds")
        for k in kinds:
            if k not in RULE_KINDS:
                return _error(422, "schema", f"unknown rule kind {k!r}", "kinds")
        try:
            config = parse_motivating(data)
        except SchemaError as exc:
            return _error(422, "schema", exc.message, exc.field_path)
        if config.reps < MIN_REPS:
            return _error(422, "schema", f"reps must be at least {MIN_REPS}", "reps")
        curve = power_curve(tuple(kinds), config)
        return _respond(
            {
                "thetas": curve.thetas.tolist(),
                "kinds": list(curve.kinds),
                "power": curve.power.tolist(),
                "mc": curve.mc.tolist(),
                "se": curve.se.tolist(),
                "seed": curve.seed,
                "reps": curve.reps,
            },
            digest,
            started,
            mc_se_max=float(curve.se.max()),
        )

    @app.post("/api/v1/casestudy")
    async def casestudy(request: Request):
        started = time.time()
        data, digest = await _body(request)
        if isinstance(data, JSONResponse):
            return data
        try:
            parsed = parse_casestudy(data)
        except SchemaError as exc:
            return _error(422, "schema", exc.message, exc.field_path)
        family = parsed.get("family")
        if family is None:
            return _error(422, "schema", "missing required field", "family")
        if parsed["design"].k > MAX_STATISTICS:
            return _error(413, "too-large", f"at most {MAX_STATISTICS} arms")
        if parsed["cells"] ** parsed["design"].k > MAX_CELLS:
            return _error(413, "too-large", f"at most {MAX_CELLS} grid cells")
        try:
            result = case_study_power(
                parsed["design"],
                parsed["availability"],
                family,
                parsed["alpha"],
                cells=parsed["cells"],
                reps=parsed["reps"],
                seed=parsed["seed"],
                eval_reps=parsed["eval_reps"],
            )
        except InfeasibleError as exc:
            return _error(409, "infeasible", str(exc))
        except (ModelError, ValueError) as exc:
            return _error(422, "schema", str(exc), "family")

        problem = rule = None
        payload = result.to_json_dict()
        if result.family == "optimal-lp":
            problem = discretize_design(
                parsed["design"], parsed["availability"], parsed["alpha"],
                cells=parsed["cells"], seed=parsed["seed"],
            )
            from .rules import TestRuleTable

            rule = TestRuleTable.from_json_dict(payload["details"]["rule"])
            payload["details"] = {"cells": parsed["cells"]}
        if parsed["design"].k == 2:
            payload["region"] = region_grids(
                parsed["design"], result, problem=problem, rule=rule
            )
        return _respond(payload, digest, started, reps=parsed["reps"])

    return app


app = create_app()
