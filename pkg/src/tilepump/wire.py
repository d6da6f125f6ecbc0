"""JSON wire forms for outcomes, algorithm states, and analysis responses.

The service is stateless: the stepper round-trips the full AlgoState through
these forms, and identical requests must produce byte-identical responses, so
everything here is deterministic (sorted keys, no timestamps).
"""

from __future__ import annotations

import json
from typing import Any

from . import certify, engine
from .errors import InstanceError
from .pumping import ConflictAt


def certificate_json(cert: certify.Certificate) -> dict:
    return json.loads(certify.serialize_certificate(cert))


def outcome_json(outcome) -> dict:
    if isinstance(outcome, engine.Pumpable):
        return {"kind": "Pumpable", "certificate": certificate_json(outcome.certificate)}
    if isinstance(outcome, engine.Fragile):
        return {"kind": "Fragile", "certificate": certificate_json(outcome.certificate)}
    if isinstance(outcome, engine.CageFree):
        return {"kind": "CageFree", "mode": outcome.mode, "suffix_index": outcome.suffix_index}
    if isinstance(outcome, engine.StakeReached):
        return {"kind": "StakeReached", "u": outcome.u, "v": outcome.v,
                "stake": [[pc.kind, pc.m_start, pc.m_end] for pc in outcome.pieces]}
    if isinstance(outcome, engine.Inconclusive):
        doc = {"kind": "Inconclusive", "reason": outcome.reason}
        if outcome.state is not None:
            doc["state"] = state_json(outcome.state)
        return doc
    raise TypeError(f"not an outcome: {outcome!r}")


def state_json(state: engine.AlgoState) -> dict:
    return {
        "mode": state.mode,
        "u": state.u,
        "v": state.v,
        "pieces": [[pc.kind, pc.m_start, pc.m_end] for pc in state.pieces],
        "history": [attempt_json(a) for a in state.history],
        "step_no": state.step_no,
    }


def attempt_json(a: engine.PumpAttempt) -> dict:
    doc = {"step_no": a.step_no, "u": a.u, "v": a.v, "lo": a.lo, "hi": a.hi,
           "direction": a.direction, "result": a.result}
    if a.conflict is not None:
        doc["conflict"] = {"point": list(a.conflict.point),
                           "iteration": a.conflict.iteration,
                           "against": a.conflict.against}
    return doc


def state_from_json(doc: Any) -> engine.AlgoState:
    try:
        pieces = tuple(engine.StakePiece(kind, int(a), int(b)) for kind, a, b in doc["pieces"])
        history = []
        for h in doc.get("history", []):
            conflictinfo = None
            if "conflict" in h:
                c = h["conflict"]
                conflictinfo = ConflictAt(tuple(c["point"]), int(c["iteration"]), c["against"])
            history.append(engine.PumpAttempt(int(h["step_no"]), int(h["u"]), int(h["v"]),
                                              int(h["lo"]), int(h["hi"]), h["direction"],
                                              h["result"], conflictinfo))
        return engine.AlgoState(doc["mode"], int(doc["u"]), int(doc["v"]),
                                pieces, tuple(history), int(doc["step_no"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceError("state", f"malformed algorithm state: {e}") from e


def report_json(report: engine.FinalReport) -> dict:
    certs = []
    if isinstance(report.outcome, (engine.Pumpable, engine.Fragile)):
        certs.append(certificate_json(report.outcome.certificate))
    return {
        "outcome": outcome_json(report.outcome),
        "certificates": certs,
        "pair": None if report.pair is None else {
            "kind": type(report.pair).__name__,
            **{k: v for k, v in report.pair.__dict__.items()},
        },
        "trace": list(report.trace),
        "history": [attempt_json(a) for a in report.history],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
