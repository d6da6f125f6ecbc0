"""Certificates of pumpability and fragility, and an independent verifier.

This module deliberately imports only the core model (tiles, assemblies,
pumping formula) — never the pump engine or the window-movie machinery — so a
bug in the search side cannot certify itself. Verification is pure replay:
a pumpable certificate is re-materialized tile by tile with explicit bond
checks, a fragile certificate is re-grown with `grow_sequence`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import CertificateError, GrowthError
from .geometry import Point, sub
from .model import (
    PathAssembly,
    TileAssemblySystem,
    VECTOR_SIDE,
    grow_sequence,
    interacts,
)
from .pumping import decision_horizons, pumping

PUMPABLE = "pumpable"
FRAGILE = "fragile"


@dataclass(frozen=True)
class PumpableCertificate:
    i: int
    j: int
    verified_horizon: int

    kind = PUMPABLE


@dataclass(frozen=True)
class FragileCertificate:
    growth_order: tuple[tuple[Point, str], ...]
    conflict_point: Point

    kind = FRAGILE


Certificate = PumpableCertificate | FragileCertificate


def decision_horizon(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int) -> int:
    """Iterations needed to decide the pumping of p between i and j against
    seed ∪ P_[1,i−1] (no extra obstacles)."""
    q = pumping(p, i, j)
    obstacles = dict(tas.seed.tiles)
    obstacles.update(p.induced_tiles(1, i - 1))
    segment = [p.pos(k) for k in range(i, j + 1)]
    m, _ = decision_horizons(obstacles, segment, q.vector)
    return m


def verify_pumpable(tas: TileAssemblySystem, p: PathAssembly, cert: PumpableCertificate) -> bool:
    """Replay the pumping to the certified horizon.

    Accepts iff the certificate's horizon covers the recomputed decision
    horizon, no tile conflicts with the seed, the path prefix, or an earlier
    pumped tile, and consecutive pumped tiles bind at every step (so every
    period junction binds).
    """
    n = len(p)
    if not isinstance(cert.i, int) or not isinstance(cert.j, int) or not isinstance(cert.verified_horizon, int):
        raise CertificateError("indices and horizon must be integers")
    if not (1 <= cert.i < cert.j <= n):
        raise CertificateError(f"need 1 ≤ i < j ≤ |P|, got ({cert.i}, {cert.j})")
    if cert.verified_horizon < 1:
        raise CertificateError("verified_horizon must be positive")
    q = pumping(p, cert.i, cert.j)  # validates type equality / non-zero period
    if cert.verified_horizon < decision_horizon(tas, p, cert.i, cert.j):
        return False

    tiles = dict(tas.seed.tiles)
    tiles.update(p.induced_tiles(1, cert.i - 1))
    tile_map = tas.tile_map
    last_k = cert.j + cert.verified_horizon * (cert.j - cert.i)
    prev: Optional[tuple[Point, str]] = None
    for k in range(cert.i, last_k + 1):
        pos, name = q.tile(k)
        if prev is not None:
            step = sub(pos, prev[0])
            side = VECTOR_SIDE.get(step)
            if side is None or not interacts(tile_map[prev[1]], side, tile_map[name]):
                return False
        existing = tiles.get(pos)
        if existing is not None and existing != name:
            return False
        tiles[pos] = name
        prev = (pos, name)
    return True


def verify_fragile(tas: TileAssemblySystem, p: PathAssembly, cert: FragileCertificate) -> bool:
    ok, _ = verify_fragile_detail(tas, p, cert)
    return ok


def verify_fragile_detail(tas: TileAssemblySystem, p: PathAssembly,
                          cert: FragileCertificate) -> tuple[bool, str]:
    """Replay the growth order; accept iff it succeeds, the conflict point is a
    path position, and the final assembly disagrees with the path there."""
    if not cert.growth_order:
        return False, "empty growth order"
    try:
        final = grow_sequence(tas, cert.growth_order)
    except GrowthError as e:
        return False, f"replay fails at step {e.step}"
    point = tuple(cert.conflict_point)
    idx = p.index_of(point)
    if idx is None:
        return False, f"conflict point {point} not on the path"
    placed = final.tiles.get(point)
    if placed is None:
        return False, f"nothing placed at {point}"
    if placed == p.name(idx):
        return False, f"no conflict at {point}: both place {placed!r}"
    return True, "ok"


def verify(tas: TileAssemblySystem, p: PathAssembly, cert: Certificate) -> bool:
    if isinstance(cert, PumpableCertificate):
        return verify_pumpable(tas, p, cert)
    if isinstance(cert, FragileCertificate):
        return verify_fragile(tas, p, cert)
    raise CertificateError(f"unknown certificate type {type(cert).__name__}")


SCHEMA_VERSION = 1


def serialize_certificate(cert: Certificate) -> str:
    if isinstance(cert, PumpableCertificate):
        doc = {"version": SCHEMA_VERSION, "kind": PUMPABLE, "i": cert.i, "j": cert.j,
               "verified_horizon": cert.verified_horizon}
    elif isinstance(cert, FragileCertificate):
        doc = {"version": SCHEMA_VERSION, "kind": FRAGILE,
               "growth_order": [[x, y, name] for (x, y), name in cert.growth_order],
               "conflict_point": list(cert.conflict_point)}
    else:
        raise CertificateError(f"unknown certificate type {type(cert).__name__}")
    return json.dumps(doc, sort_keys=True) + "\n"


def parse_certificate(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "kind" not in doc:
        raise CertificateError("certificate must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == PUMPABLE:
        try:
            return PumpableCertificate(int(doc["i"]), int(doc["j"]), int(doc["verified_horizon"]))
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"malformed pumpable certificate: {e}") from e
    if kind == FRAGILE:
        try:
            order = tuple(((int(x), int(y)), str(name)) for x, y, name in doc["growth_order"])
            px, py = doc["conflict_point"]
            return FragileCertificate(order, (int(px), int(py)))
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"malformed fragile certificate: {e}") from e
    raise CertificateError(f"unknown certificate kind {kind!r}")
