"""Stateless HTTP JSON API consumed by the playground.

Endpoints (all under /api/v1): POST /analyze, POST /step, POST /render,
GET /bounds, GET /health. Every request carries the full instance; algorithm
stepping round-trips the serialized state. Responses are deterministic
functions of requests. Errors: 400 parse diagnostics, 413 oversized request,
422 precondition failures, 503 compute budget exceeded.
"""

from __future__ import annotations

import json
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import engine, movies, wire
from .budget import budget, budget_ms_from_env
from .errors import (
    BudgetExceeded,
    InstanceError,
    PreconditionFailed,
    TilepumpError,
)
from .instances import parse_instance
from .pumping import decide_pumping
from .render import render_svg
from .visibility import visible_glues

MAX_BODY_BYTES = 1_000_000


def _parse_body_instance(doc: Any):
    if not isinstance(doc, dict) or "instance" not in doc:
        raise InstanceError("$", "request must carry an 'instance' object")
    return parse_instance(json.dumps(doc["instance"])).to_system()


def _limits_from_doc(doc: Any) -> engine.AlgoLimits:
    limits = engine.AlgoLimits()
    raw = doc.get("limits") if isinstance(doc, dict) else None
    if isinstance(raw, dict):
        for key, val in raw.items():
            if not hasattr(limits, key):
                raise PreconditionFailed(f"unknown limit {key!r}")
            setattr(limits, key, val)
    return limits


def _analyze(doc: Any) -> dict:
    tas, path = _parse_body_instance(doc)
    command = doc.get("command", {"kind": "analyze"})
    if isinstance(command, str):
        command = {"kind": command}
    kind = command.get("kind", "analyze")

    if kind == "analyze":
        report = engine.conclude(tas, path, _limits_from_doc(doc))
        out = wire.report_json(report)
        out["overlays"] = _overlays_for_report(tas, path, report)
        return out
    if kind == "pump":
        i, j = int(command["i"]), int(command["j"])
        decision = decide_pumping(tas, path, i, j)
        if hasattr(decision, "point"):
            return {"outcome": {"kind": "ConflictAt", "point": list(decision.point),
                                "iteration": decision.iteration, "against": decision.against},
                    "certificates": [], "trace": [], "overlays": {"conflict": list(decision.point)}}
        return {"outcome": {"kind": "Infinite", "horizon": decision.horizon},
                "certificates": [], "trace": [],
                "overlays": {"pumping": {"i": i, "j": j,
                             "iterations": min(decision.horizon + len(path), 32)}}}
    if kind == "visibility":
        side = command.get("side", "east")
        report = visible_glues(path, tas.seed, side)
        edges = report.east_visible if side == "east" else report.west_visible
        return {"outcome": {"kind": "Visibility", "side": side},
                "certificates": [], "trace": [],
                "overlays": {"visibility": side},
                "visible": [{"i": e.i, "level": e.level, "x": e.x, "kind": e.kind}
                            for e in edges]}
    if kind == "uturn":
        triple = engine.detect_nice_uturn(tas, path)
        return {"outcome": {"kind": "UTurn", "triple": list(triple) if triple else None},
                "certificates": [], "trace": [], "overlays": {}}
    if kind == "step":
        return _step(doc)
    raise PreconditionFailed(f"unknown command {kind!r}")


def _overlays_for_report(tas, path, report: engine.FinalReport) -> dict:
    overlays: dict = {"visibility": "both"}
    outcome = report.outcome
    if isinstance(outcome, engine.Pumpable):
        cert = outcome.certificate
        # enough translates that the ghosts visibly clear the drawn path
        overlays["pumping"] = {"i": cert.i, "j": cert.j,
                               "iterations": min(cert.verified_horizon + len(path), 32)}
    if isinstance(outcome, engine.Fragile):
        overlays["conflict"] = list(outcome.certificate.conflict_point)
        overlays["witness_order"] = [[x, y, name] for (x, y), name
                                     in outcome.certificate.growth_order]
    return overlays


def _step(doc: Any) -> dict:
    tas, path = _parse_body_instance(doc)
    i, j = int(doc["i"]), int(doc["j"])
    raw_state = doc.get("state")
    state = engine.initial_state(tas, path, i, j) if raw_state is None \
        else wire.state_from_json(raw_state)
    result = engine.algo_step(tas, path, i, j, state)
    if isinstance(result, engine.Halt):
        return {"halted": True, "outcome": wire.outcome_json(result.outcome),
                "events": list(result.events), "state": None,
                "stake": _stake_cells(tas, path, i, j, state)}
    return {"halted": False, "outcome": None, "events": list(result.events),
            "state": wire.state_json(result.state),
            "stake": _stake_cells(tas, path, i, j, result.state)}


def _stake_cells(tas, path, i, j, state: engine.AlgoState) -> list:
    from .geometry import sub as vsub

    vjj = vsub(path.pos(j), path.pos(i))
    seq = engine._stake_sequence(path, state.pieces, vjj)
    return [{"x": q[0], "y": q[1], "tile": name,
             "provenance": piece.kind}
            for piece, (q, name) in zip(_piece_per_tile(state, path), seq)]


def _piece_per_tile(state: engine.AlgoState, path) -> list:
    out = []
    for piece in state.pieces:
        out.extend([piece] * (piece.m_end - piece.m_start + 1))
    return out


def create_app() -> FastAPI:
    app = FastAPI(title="tilepump", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def guard(request: Request, call_next):
        cl = request.headers.get("content-length")
        if cl is not None and int(cl) > MAX_BODY_BYTES:
            return JSONResponse({"error": "request too large"}, status_code=413)
        try:
            with budget(budget_ms_from_env()):
                return await call_next(request)
        except BudgetExceeded:
            return JSONResponse({"error": "compute budget exceeded"}, status_code=503)

    def run(handler, doc):
        try:
            return JSONResponse(handler(doc))
        except InstanceError as e:
            return JSONResponse({"error": str(e), "field": e.field}, status_code=400)
        except BudgetExceeded:
            return JSONResponse({"error": "compute budget exceeded"}, status_code=503)
        except (PreconditionFailed, KeyError, TypeError, ValueError) as e:
            return JSONResponse({"error": str(e)}, status_code=422)
        except TilepumpError as e:
            return JSONResponse({"error": str(e)}, status_code=422)

    @app.post("/api/v1/analyze")
    async def analyze(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"error": "body is not valid JSON", "field": "$"}, status_code=400)
        return run(_analyze, doc)

    @app.post("/api/v1/step")
    async def step(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"error": "body is not valid JSON", "field": "$"}, status_code=400)
        return run(_step, doc)

    @app.post("/api/v1/render")
    async def render(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"error": "body is not valid JSON", "field": "$"}, status_code=400)

        def handler(d):
            tas, path = _parse_body_instance(d)
            svg = render_svg(tas, path, d.get("overlays") or {})
            return {"svg": svg}

        return run(handler, doc)

    @app.get("/api/v1/bounds")
    async def bounds(tiles: int = Query(..., ge=1), seed: int = Query(..., ge=1)):
        out = []
        for name in movies.bound_names():
            wanted = movies.bound_params(name)
            defaults = {"tiles": tiles, "seed_size": seed, "n": 1, "w": 3, "h": 2, "v_l1": 1}
            kwargs = {k: defaults[k] for k in wanted}
            arg = (tiles + 1) ** kwargs.get("n", 1) if name == "f_b" else None
            if name == "N_cagefree":
                arg = tiles ** (kwargs["v_l1"] ** 2)
            if arg is not None and arg > 200_000:
                out.append({"name": name, "params": kwargs, "value": None,
                            "note": "astronomical"})
                continue
            rep = movies.bound(name, **kwargs)
            out.append({"name": rep.name, "formula": rep.formula,
                        "params": kwargs, "value": str(rep.value)})
        return JSONResponse({"bounds": out})

    @app.get("/api/v1/health")
    async def health():
        return PlainTextResponse("ok")

    return app
