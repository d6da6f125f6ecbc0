"""Instance files: JSON schema, validating parser, serializer, and the
canonical fixtures shipped with the package.

Schema::

    {
      "tileset": [{"name": "t", "north": ["a", 1], "east": ["", 0],
                   "south": ["", 0], "west": ["a", 1]}, ...],
      "seed":    [{"x": 0, "y": 0, "tile": "t"}, ...],
      "path":    [{"x": 1, "y": 0, "tile": "t"}, ...]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .errors import InstanceError, InvalidAssembly, UnknownTile, UnstableSeed
from .model import (
    Assembly,
    Glue,
    PathAssembly,
    TileAssemblySystem,
    TileType,
    validate_path,
)

FIXTURE_NAMES = ("LINE-E", "COL-N", "HOOK-S", "NSHAPE", "FORK")


@dataclass
class InstanceFile:
    tileset: list[TileType]
    seed: list[tuple[int, int, str]]
    path: list[tuple[int, int, str]]

    def to_system(self) -> tuple[TileAssemblySystem, PathAssembly]:
        tile_map = {t.name: t for t in self.tileset}
        seed_tiles = {(x, y): n for x, y, n in self.seed}
        try:
            seed = Assembly(seed_tiles, tile_map)
        except InvalidAssembly as e:
            raise UnstableSeed(str(e)) from e
        try:
            tas = TileAssemblySystem(tuple(self.tileset), seed)
        except InvalidAssembly as e:
            raise UnstableSeed(str(e)) from e
        steps = [((x, y), n) for x, y, n in self.path]
        path = validate_path(tas, steps)
        return tas, path


def _want(obj: Any, key: str, kind, field: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InstanceError(field, f"missing field {key!r}")
    val = obj[key]
    if kind is int and isinstance(val, bool):
        raise InstanceError(f"{field}.{key}", "expected an integer")
    if not isinstance(val, kind):
        raise InstanceError(f"{field}.{key}", f"expected {kind.__name__}")
    return val


def _parse_glue(raw: Any, field: str) -> Glue:
    if (not isinstance(raw, list)) or len(raw) != 2:
        raise InstanceError(field, "expected [label, strength]")
    label, strength = raw
    if not isinstance(label, str):
        raise InstanceError(field, "glue label must be a string")
    if isinstance(strength, bool) or not isinstance(strength, int) or strength < 0:
        raise InstanceError(field, "glue strength must be a non-negative integer")
    return Glue(label, strength)


def parse_instance(text: str) -> InstanceFile:
    """Parse and fully validate an instance; first error wins, with field path."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError("$", f"invalid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InstanceError("$", "top level must be an object")
    tileset_raw = _want(raw, "tileset", list, "$")
    seed_raw = _want(raw, "seed", list, "$")
    path_raw = raw.get("path", [])
    if not isinstance(path_raw, list):
        raise InstanceError("$.path", "expected a list")

    tiles: list[TileType] = []
    names: set[str] = set()
    for idx, t in enumerate(tileset_raw):
        field = f"tileset[{idx}]"
        name = _want(t, "name", str, field)
        if name in names:
            raise InstanceError(f"{field}.name", f"duplicate tile name {name!r}")
        names.add(name)
        glues = {side: _parse_glue(_want(t, side, list, field), f"{field}.{side}")
                 for side in ("north", "east", "south", "west")}
        tiles.append(TileType(name, glues["north"], glues["east"], glues["south"], glues["west"]))

    def parse_placements(raw_list, section) -> list[tuple[int, int, str]]:
        out = []
        for idx, cell in enumerate(raw_list):
            field = f"{section}[{idx}]"
            x = _want(cell, "x", int, field)
            y = _want(cell, "y", int, field)
            tile = _want(cell, "tile", str, field)
            if tile not in names:
                raise UnknownTile(f"{field}.tile", tile)
            out.append((x, y, tile))
        return out

    inst = InstanceFile(tiles, parse_placements(seed_raw, "seed"), parse_placements(path_raw, "path"))
    inst.to_system()  # surfaces unstable-seed / invalid-path diagnostics
    return inst


def serialize_instance(inst: InstanceFile) -> str:
    def glue_json(g: Glue):
        return [g.label, g.strength]

    doc = {
        "tileset": [
            {"name": t.name, "north": glue_json(t.north), "east": glue_json(t.east),
             "south": glue_json(t.south), "west": glue_json(t.west)}
            for t in inst.tileset
        ],
        "seed": [{"x": x, "y": y, "tile": n} for x, y, n in inst.seed],
        "path": [{"x": x, "y": y, "tile": n} for x, y, n in inst.path],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def instance_from_system(tas: TileAssemblySystem, path: PathAssembly) -> InstanceFile:
    return InstanceFile(
        list(tas.tileset),
        [(x, y, n) for (x, y), n in sorted(tas.seed.tiles.items())],
        [(x, y, n) for (x, y), n in path.steps],
    )


def load_fixture(name: str) -> tuple[TileAssemblySystem, PathAssembly]:
    """Load one of the canonical shipped fixtures by name."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; have {FIXTURE_NAMES}")
    text = resources.files("tilepump").joinpath(f"fixtures/{name}.json").read_text()
    return parse_instance(text).to_system()


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files("tilepump").joinpath(f"fixtures/{name}.json").read_text()
