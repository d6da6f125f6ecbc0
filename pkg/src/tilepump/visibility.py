"""Visible glues of a path, the watershed split, index ordering, and
dominating tiles.

A vertical step of the path P puts a glue on the inter-row boundary it
crosses. That glue is visible from the east (west) when its horizontal ray in
that direction meets no other glue of P on the same boundary and no edge
between two vertically adjacent seed tiles there — operationally, when it is
the strictly rightmost (leftmost) glue on its boundary level and beats every
seed inter-tile edge on that level. Horizontal steps carry no east/west
visibility, and the seed→P_1 junction is not a glue of P unless asked for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidVector, PreconditionFailed
from .geometry import HorizontalDualRay, Vector, add, bounding_box, scale
from .model import Assembly, PathAssembly, interacts

NORTH_OUTPUT = "NorthOutput"
SOUTH_OUTPUT = "SouthOutput"

EAST_SIDE = "east"
WEST_SIDE = "west"


@dataclass(frozen=True)
class GlueEdge:
    """Glue put down by the vertical step P_i → P_{i+1}.

    `level` names the boundary between rows level and level+1; `x` is the
    column; the kind is NorthOutput iff the step heads north. The seed→P_1
    junction edge, when included, carries i = 0.
    """

    i: int
    level: int
    x: int
    kind: str


@dataclass
class VisibilityReport:
    east_visible: list[GlueEdge] = field(default_factory=list)
    west_visible: list[GlueEdge] = field(default_factory=list)
    rays: dict[tuple[str, int], HorizontalDualRay] = field(default_factory=dict)


@dataclass(frozen=True)
class DominationReport:
    vector: Vector
    dominating_indices: tuple[int, ...]


def glue_edges(p: PathAssembly, seed: Optional[Assembly] = None,
               include_seed_junction: bool = False) -> list[GlueEdge]:
    """Glue edges of p's vertical steps, in path order."""
    edges: list[GlueEdge] = []
    if include_seed_junction and seed is not None and len(p) >= 1:
        p1 = p.pos(1)
        # first vertical seed neighbor the path tile actually binds to
        for d, kind in (((0, -1), NORTH_OUTPUT), ((0, 1), SOUTH_OUTPUT)):
            q = add(p1, d)
            if q in seed.tiles:
                t_seed = seed.tileset[seed.tiles[q]]
                side = "N" if kind == NORTH_OUTPUT else "S"
                if interacts(t_seed, side, seed.tileset[p.name(1)]):
                    edges.append(GlueEdge(0, min(p1[1], q[1]), p1[0], kind))
                    break
    for i in range(1, len(p)):
        a = p.pos(i)
        b = p.pos(i + 1)
        if a[0] != b[0]:
            continue
        kind = NORTH_OUTPUT if b[1] > a[1] else SOUTH_OUTPUT
        edges.append(GlueEdge(i, min(a[1], b[1]), a[0], kind))
    return edges


def seed_level_edges(seed: Assembly) -> dict[int, list[int]]:
    """Columns of vertical seed inter-tile edges per boundary level.

    Any two vertically adjacent seed tiles obstruct, interacting or not.
    """
    out: dict[int, list[int]] = {}
    for (x, y) in seed.tiles:
        if (x, y + 1) in seed.tiles:
            out.setdefault(y, []).append(x)
    return out


def visibility_report(p: PathAssembly, seed: Assembly,
                      include_seed_junction: bool = False,
                      edges: Optional[list[GlueEdge]] = None) -> VisibilityReport:
    """Both-sided visibility of p's glues against p itself and the seed."""
    if edges is None:
        edges = glue_edges(p, seed, include_seed_junction)
    by_level: dict[int, list[GlueEdge]] = {}
    for e in edges:
        by_level.setdefault(e.level, []).append(e)
    seed_edges = seed_level_edges(seed)
    report = VisibilityReport()
    for level, es in sorted(by_level.items()):
        xs = [e.x for e in es]
        seed_xs = seed_edges.get(level, [])
        east = max(es, key=lambda e: e.x)
        if xs.count(east.x) == 1 and all(east.x > sx for sx in seed_xs):
            report.east_visible.append(east)
            report.rays[(EAST_SIDE, level)] = HorizontalDualRay(level, east.x + 1, +1)
        west = min(es, key=lambda e: e.x)
        if xs.count(west.x) == 1 and all(west.x < sx for sx in seed_xs):
            report.west_visible.append(west)
            report.rays[(WEST_SIDE, level)] = HorizontalDualRay(level, west.x - 1, -1)
    return report


def visible_glues(p: PathAssembly, seed: Assembly, side: Optional[str] = None,
                  include_seed_junction: bool = False) -> VisibilityReport:
    """Visibility report; `side` ("east"/"west") narrows to one side."""
    report = visibility_report(p, seed, include_seed_junction)
    if side is None:
        return report
    if side == EAST_SIDE:
        return VisibilityReport(report.east_visible, [],
                                {k: v for k, v in report.rays.items() if k[0] == EAST_SIDE})
    if side == WEST_SIDE:
        return VisibilityReport([], report.west_visible,
                                {k: v for k, v in report.rays.items() if k[0] == WEST_SIDE})
    raise ValueError(f"unknown side {side!r}")


def output_glue_visible_on_prefix(p: PathAssembly, k: int, seed: Assembly, side: str) -> bool:
    """Is the output glue of P_k visible (from `side`) on seed ∪ P_[1,k]?

    The competing glues are the steps of P_[1,k] plus P_k's own output edge,
    i.e. the glue edges of the prefix P_[1,k+1].
    """
    if k >= len(p):
        return False
    a, b = p.pos(k), p.pos(k + 1)
    if a[0] != b[0]:
        return False
    report = visibility_report(p.prefix(k + 1), seed)
    chosen = report.east_visible if side == EAST_SIDE else report.west_visible
    return any(e.i == k for e in chosen)


@dataclass(frozen=True)
class Split:
    y0: int


@dataclass(frozen=True)
class Violation:
    """Counterexample evidence; must never occur for valid inputs."""

    detail: tuple


def _require_last_highest(p: PathAssembly):
    if len(p) == 0:
        raise PreconditionFailed("empty path")
    top = max(pt[1] for pt, _ in p.steps)
    if p.pos(len(p))[1] != top:
        raise PreconditionFailed("last tile of the path is not a highest tile")


def watershed(p: PathAssembly, seed: Assembly) -> Split | Violation:
    """Boundary level splitting east-visible glues: souths below, norths above."""
    _require_last_highest(p)
    report = visibility_report(p, seed)
    norths = [e.level for e in report.east_visible if e.kind == NORTH_OUTPUT]
    souths = [e.level for e in report.east_visible if e.kind == SOUTH_OUTPUT]
    if norths and souths and min(norths) < max(souths):
        return Violation((("north", min(norths)), ("south", max(souths))))
    if souths:
        return Split(max(souths) + 1)
    if norths:
        return Split(min(0, min(norths)))
    return Split(0)


OK = "ok"


def check_order(p: PathAssembly, seed: Assembly) -> str | Violation:
    """East-visible norths must rise with path index, souths must fall."""
    _require_last_highest(p)
    report = visibility_report(p, seed)
    norths = sorted((e.i, e.level) for e in report.east_visible if e.kind == NORTH_OUTPUT)
    for (i1, l1), (i2, l2) in zip(norths, norths[1:]):
        if not l1 < l2:
            return Violation(((i1, l1), (i2, l2)))
    souths = sorted((e.i, e.level) for e in report.east_visible if e.kind == SOUTH_OUTPUT)
    for (i1, l1), (i2, l2) in zip(souths, souths[1:]):
        if not l1 > l2:
            return Violation(((i1, l1), (i2, l2)))
    return OK


def dominating_tiles(p: PathAssembly, v: Vector) -> DominationReport:
    """Indices whose forward ray pos(P_i) + k·v (k ≥ 1) avoids every path tile."""
    if v == (0, 0):
        raise InvalidVector("dominating vector must be non-zero")
    positions = p.positions
    (x0, y0), (x1, y1) = bounding_box(positions)
    out = []
    for i in range(1, len(p) + 1):
        q = p.pos(i)
        k = 1
        dominating = True
        while True:
            r = add(q, scale(v, k))
            if not (x0 <= r[0] <= x1 and y0 <= r[1] <= y1):
                break
            if r in positions:
                dominating = False
                break
            k += 1
        if dominating:
            out.append(i)
    return DominationReport(v, tuple(out))
