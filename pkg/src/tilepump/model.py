"""Temperature-1 abstract tile assembly: tiles, assemblies, paths, growth.

Positions are integer (x, y) tuples, y northward. Paths are 1-indexed in the
public API, matching the usual convention for path assemblies.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    GrowthError,
    InvalidAssembly,
    InvalidPath,
    PositionOccupied,
)
from .geometry import EAST, NORTH, SOUTH, WEST, Point, add, adjacent, sub

Side = str  # "N" | "E" | "S" | "W"

OPPOSITE: dict[Side, Side] = {"N": "S", "S": "N", "E": "W", "W": "E"}
SIDE_VECTOR: dict[Side, Point] = {"N": NORTH, "E": EAST, "S": SOUTH, "W": WEST}
VECTOR_SIDE: dict[Point, Side] = {NORTH: "N", EAST: "E", SOUTH: "S", WEST: "W"}

NULL_GLUE_LABEL = ""


@dataclass(frozen=True)
class Glue:
    label: str
    strength: int

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError("glue strength must be non-negative")

    @property
    def inert(self) -> bool:
        # strength 0 is inert regardless of label
        return self.strength == 0


NULL_GLUE = Glue(NULL_GLUE_LABEL, 0)


@dataclass(frozen=True)
class TileType:
    name: str
    north: Glue
    east: Glue
    south: Glue
    west: Glue

    def glue(self, side: Side) -> Glue:
        if side == "N":
            return self.north
        if side == "E":
            return self.east
        if side == "S":
            return self.south
        if side == "W":
            return self.west
        raise ValueError(f"unknown side {side!r}")


def interacts(t1: TileType, side: Side, t2: TileType) -> bool:
    """Do t1 (with t2 on its `side`) and t2 bind across the shared edge?"""
    g1 = t1.glue(side)
    g2 = t2.glue(OPPOSITE[side])
    return g1.strength >= 1 and g2.strength >= 1 and g1.label == g2.label


class Assembly:
    """Finite placement of tile types with a 4-connected domain."""

    __slots__ = ("tiles", "tileset")

    def __init__(self, tiles: Mapping[Point, str], tileset: Mapping[str, TileType], check: bool = True):
        self.tiles: dict[Point, str] = dict(tiles)
        self.tileset: dict[str, TileType] = dict(tileset)
        if check:
            self._validate()

    def _validate(self):
        if not self.tiles:
            raise InvalidAssembly("assembly domain is empty")
        for p, name in self.tiles.items():
            if name not in self.tileset:
                raise InvalidAssembly(f"tile name {name!r} at {p} not in tile set")
        # 4-connected domain
        start = next(iter(self.tiles))
        seen = {start}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for d in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                q = add(p, d)
                if q in self.tiles and q not in seen:
                    seen.add(q)
                    queue.append(q)
        if len(seen) != len(self.tiles):
            raise InvalidAssembly("assembly domain is not connected")

    def __len__(self) -> int:
        return len(self.tiles)

    def __contains__(self, p: Point) -> bool:
        return p in self.tiles

    @property
    def domain(self) -> set[Point]:
        return set(self.tiles)

    def name_at(self, p: Point) -> Optional[str]:
        return self.tiles.get(p)

    def tile_at(self, p: Point) -> Optional[TileType]:
        name = self.tiles.get(p)
        return None if name is None else self.tileset[name]

    def with_tile(self, p: Point, name: str) -> "Assembly":
        if p in self.tiles:
            raise PositionOccupied(f"{p} already holds {self.tiles[p]}")
        tiles = dict(self.tiles)
        tiles[p] = name
        return Assembly(tiles, self.tileset, check=False)

    def items(self):
        return self.tiles.items()


def is_stable(a: Assembly) -> bool:
    """τ=1 stability: the binding graph over the domain is connected."""
    if len(a) == 0:
        raise InvalidAssembly("empty assembly")
    start = next(iter(a.tiles))
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        tp = a.tileset[a.tiles[p]]
        for side, d in SIDE_VECTOR.items():
            q = add(p, d)
            if q in a.tiles and q not in seen and interacts(tp, side, a.tileset[a.tiles[q]]):
                seen.add(q)
                queue.append(q)
    return len(seen) == len(a.tiles)


@dataclass(frozen=True)
class TileAssemblySystem:
    """A temperature-1 system: tile set and a finite τ-stable seed."""

    tileset: tuple[TileType, ...]
    seed: Assembly
    temperature: int = 1

    def __post_init__(self):
        names = [t.name for t in self.tileset]
        if len(set(names)) != len(names):
            raise InvalidAssembly("duplicate tile names in tile set")
        if self.temperature != 1:
            raise InvalidAssembly("only temperature 1 is supported")
        if not is_stable(self.seed):
            raise InvalidAssembly("seed is not τ-stable")

    @property
    def tile_map(self) -> dict[str, TileType]:
        return {t.name: t for t in self.tileset}

    def tile(self, name: str) -> TileType:
        for t in self.tileset:
            if t.name == name:
                return t
        raise KeyError(name)


class PathAssembly:
    """A 1-indexed sequence of (position, tile name) steps forming a simple path."""

    __slots__ = ("steps", "_index_of")

    def __init__(self, steps: Sequence[tuple[Point, str]]):
        self.steps: tuple[tuple[Point, str], ...] = tuple((tuple(p), n) for p, n in steps)
        self._index_of: dict[Point, int] = {p: k + 1 for k, (p, _) in enumerate(self.steps)}

    def __len__(self) -> int:
        return len(self.steps)

    def pos(self, i: int) -> Point:
        return self.steps[i - 1][0]

    def name(self, i: int) -> str:
        return self.steps[i - 1][1]

    def tile(self, i: int, tas: TileAssemblySystem) -> TileType:
        return tas.tile_map[self.steps[i - 1][1]]

    def index_of(self, p: Point) -> Optional[int]:
        return self._index_of.get(p)

    @property
    def positions(self) -> set[Point]:
        return set(self._index_of)

    def prefix(self, k: int) -> "PathAssembly":
        """The sub-path P_[1,k] (k may be 0 for the empty prefix)."""
        return PathAssembly(self.steps[:k])

    def induced_tiles(self, lo: int = 1, hi: Optional[int] = None) -> dict[Point, str]:
        """Position→name map of P_[lo,hi] (defaults to the whole path)."""
        if hi is None:
            hi = len(self.steps)
        return {p: n for p, n in self.steps[lo - 1 : hi]}

    def induced_assembly(self, tas: TileAssemblySystem, lo: int = 1, hi: Optional[int] = None) -> Assembly:
        return Assembly(self.induced_tiles(lo, hi), tas.tile_map, check=False)

    def __iter__(self):
        return iter(self.steps)

    def __eq__(self, other):
        return isinstance(other, PathAssembly) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)


def validate_path(tas: TileAssemblySystem, steps: Sequence[tuple[Point, str]]) -> PathAssembly:
    """Check the path-assembly invariants and return the validated path.

    Raises InvalidPath (with the offending 1-based step) when positions repeat,
    consecutive positions are not 4-adjacent, consecutive tiles fail to
    interact, a position overlaps the seed, or the first tile does not bind to
    any seed tile.
    """
    tiles = tas.tile_map
    seen: set[Point] = set()
    prev: Optional[tuple[Point, TileType]] = None
    for k, (p, name) in enumerate(steps, start=1):
        p = tuple(p)
        if name not in tiles:
            raise InvalidPath(k, f"unknown tile {name!r}")
        if p in seen:
            raise InvalidPath(k, f"repeated position {p}")
        if p in tas.seed.tiles:
            raise InvalidPath(k, f"position {p} overlaps the seed")
        t = tiles[name]
        if k == 1:
            bound = False
            for side, d in SIDE_VECTOR.items():
                q = add(p, d)
                sname = tas.seed.tiles.get(q)
                if sname is not None and interacts(t, side, tiles[sname]):
                    bound = True
                    break
            if not bound:
                raise InvalidPath(1, "first tile does not bind to any seed tile")
        else:
            pp, pt = prev
            if not adjacent(p, pp):
                raise InvalidPath(k, f"{pp} and {p} are not adjacent")
            side = VECTOR_SIDE[sub(p, pp)]
            if not interacts(pt, side, t):
                raise InvalidPath(k, f"tiles at {pp} and {p} do not interact")
        seen.add(p)
        prev = (p, t)
    return PathAssembly(steps)


def attachable(a: Assembly, p: Point, t: TileType) -> bool:
    """May tile t attach at free position p (binds at least one neighbor)?"""
    if p in a.tiles:
        raise PositionOccupied(f"position {p} is occupied")
    for side, d in SIDE_VECTOR.items():
        q = add(p, d)
        name = a.tiles.get(q)
        if name is not None and interacts(t, side, a.tileset[name]):
            return True
    return False


def grow_sequence(tas: TileAssemblySystem, order: Iterable[tuple[Point, str]]) -> Assembly:
    """Fold single-tile attachments over the seed; GrowthError on a bad step."""
    tiles = dict(tas.seed.tiles)
    tileset = tas.tile_map
    cur = Assembly(tiles, tileset, check=False)
    for k, (p, name) in enumerate(order, start=1):
        p = tuple(p)
        if name not in tileset:
            raise GrowthError(k, f"unknown tile {name!r}")
        if p in cur.tiles:
            raise GrowthError(k, f"position {p} already occupied")
        if not attachable(cur, p, tileset[name]):
            raise GrowthError(k, f"{name!r} not attachable at {p}")
        cur.tiles[p] = name
    return Assembly(cur.tiles, tileset, check=False)


def conflict(a: Assembly | Mapping[Point, str], b: Assembly | Mapping[Point, str]) -> Optional[Point]:
    """Least (y, then x) point where both place different tile types."""
    ta = a.tiles if isinstance(a, Assembly) else a
    tb = b.tiles if isinstance(b, Assembly) else b
    if len(tb) < len(ta):
        ta, tb = tb, ta
    best: Optional[Point] = None
    for p, name in ta.items():
        other = tb.get(p)
        if other is not None and other != name:
            if best is None or (p[1], p[0]) < (best[1], best[0]):
                best = p
    return best


def highest_y(points: Iterable[Point]) -> int:
    return max(p[1] for p in points)


def rows_above(p: Point, seed: Assembly) -> int:
    """How many rows p sits above the seed's highest tile (may be negative)."""
    return p[1] - highest_y(seed.tiles)
