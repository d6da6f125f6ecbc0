"""Shared corpus machinery for the test suite: exhaustive small-system
enumeration, producible-path enumeration, random instance generators, and
independent oracles (naive pumping materialization, exhaustive assembly
search) used to cross-check the library.
"""

from __future__ import annotations

import random
from collections import deque
from itertools import combinations, product

from tilepump.model import (
    Assembly,
    Glue,
    PathAssembly,
    TileAssemblySystem,
    TileType,
    interacts,
)

INERT = Glue("", 0)
GLUE_A = Glue("a", 1)
GLUE_B = Glue("b", 1)
SIDE_CHOICES = (INERT, GLUE_A, GLUE_B)

DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))
DIR_SIDE = {(0, 1): "N", (1, 0): "E", (0, -1): "S", (-1, 0): "W"}


def all_tile_shapes():
    """All 81 glue assignments over {inert, a/1, b/1}."""
    return list(product(SIDE_CHOICES, repeat=4))  # (N, E, S, W)


def _shape_label_swap(shape):
    def sw(g: Glue) -> Glue:
        if g.label == "a":
            return GLUE_B
        if g.label == "b":
            return GLUE_A
        return g
    return tuple(sw(g) for g in shape)


def _shape_mirror(shape):
    n, e, s, w = shape
    return (n, w, s, e)


def _canonical_system_key(shapes: tuple, seed_idx: int):
    """Least representation over glue-label swap and mirror isomorphisms."""
    best = None
    for xform in (lambda sh: sh,
                  _shape_label_swap,
                  _shape_mirror,
                  lambda sh: _shape_label_swap(_shape_mirror(sh))):
        mapped = [tuple((g.label, g.strength) for g in xform(sh)) for sh in shapes]
        order = sorted(range(len(mapped)), key=lambda idx: mapped[idx])
        key = (tuple(mapped[idx] for idx in order), order.index(seed_idx))
        if best is None or key < best:
            best = key
    return best


def enumerate_systems(max_tiles: int = 2):
    """All single-seed systems with ≤ max_tiles tile types over 2 glue labels,
    deduped by label-swap/mirror isomorphism."""
    shapes = all_tile_shapes()
    seen = set()
    combos = [(s,) for s in shapes]
    if max_tiles >= 2:
        combos += list(combinations(shapes, 2))
    for combo in combos:
        for seed_idx in range(len(combo)):
            key = _canonical_system_key(combo, seed_idx)
            if key in seen:
                continue
            seen.add(key)
            tiles = tuple(
                TileType(f"t{i}", *shape) for i, shape in enumerate(combo)
            )
            seed = Assembly({(0, 0): tiles[seed_idx].name},
                            {t.name: t for t in tiles}, check=False)
            yield TileAssemblySystem(tiles, seed)


def _binding_table(tas: TileAssemblySystem):
    """bind[(name, dir)] = tuple of tile names attachable in that direction."""
    table = {}
    for t in tas.tileset:
        for d in DIRS:
            side = DIR_SIDE[d]
            table[(t.name, d)] = tuple(
                u.name for u in tas.tileset if interacts(t, side, u))
    return table


def producible_paths(tas: TileAssemblySystem, max_len: int = 10, half: int = 6,
                     cap: int | None = None):
    """DFS over producible simple paths within the window |x|,|y| ≤ half.

    Yields raw step tuples ((pos, name), ...); every prefix is yielded as its
    own instance. Deterministic order; stops after `cap` paths if given.
    """
    bind = _binding_table(tas)
    seed_tiles = tas.seed.tiles
    count = 0

    starts = []
    for q, sname in sorted(seed_tiles.items()):
        for d in DIRS:
            p1 = (q[0] + d[0], q[1] + d[1])
            if p1 in seed_tiles or abs(p1[0]) > half or abs(p1[1]) > half:
                continue
            for name in bind[(sname, d)]:
                starts.append((p1, name))
    starts = sorted(set(starts))

    stack = [((start,), frozenset((start[0],))) for start in reversed(starts)]
    while stack:
        steps, occupied = stack.pop()
        yield steps
        count += 1
        if cap is not None and count >= cap:
            return
        if len(steps) >= max_len:
            continue
        last_pos, last_name = steps[-1]
        for d in reversed(DIRS):
            q = (last_pos[0] + d[0], last_pos[1] + d[1])
            if q in occupied or q in seed_tiles or abs(q[0]) > half or abs(q[1]) > half:
                continue
            for name in reversed(bind[(last_name, d)]):
                stack.append((steps + ((q, name),), occupied | {q}))


def uturn_prefilter(steps) -> bool:
    """Cheap necessary condition for a nice U-turn: at least two north steps
    and a later south step."""
    norths = 0
    second_north_at = None
    for k in range(len(steps) - 1):
        dy = steps[k + 1][0][1] - steps[k][0][1]
        dx = steps[k + 1][0][0] - steps[k][0][0]
        if dx == 0 and dy == 1:
            norths += 1
            if norths == 2 and second_north_at is None:
                second_north_at = k
        elif dx == 0 and dy == -1 and second_north_at is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# independent oracles


def naive_pump_scan(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                    iterations: int, extra=None):
    """Direct materialization of the pumping formula with a conflict scan;
    written independently of decide_pumping."""
    vi = p.pos(i)
    vj = p.pos(j)
    v = (vj[0] - vi[0], vj[1] - vi[1])
    occupied = dict(tas.seed.tiles)
    for k in range(1, i):
        occupied[p.pos(k)] = p.name(k)
    if extra:
        items = extra.items() if hasattr(extra, "items") else extra.tiles.items()
        for q, nm in items:
            occupied[q] = nm
    period = j - i
    placed = {}
    for k in range(i, j + iterations * period + 1):
        src = i + ((k - i) % period)
        reps = (k - i) // period
        sp = p.pos(src)
        pos = (sp[0] + reps * v[0], sp[1] + reps * v[1])
        name = p.name(src)
        prior = occupied.get(pos, placed.get(pos))
        if prior is not None and prior != name:
            return ("conflict", pos)
        if prior is None:
            placed[pos] = name
    return ("infinite", None)


def exhaustive_fragility(tas: TileAssemblySystem, p: PathAssembly,
                         window_margin: int = 2, max_assemblies: int = 100_000) -> bool:
    """Exhaustive BFS over producible assemblies in the window: does any
    conflict with the path's induced assembly? Independent of
    fragility_witness (no shared helpers)."""
    induced = {pos: name for pos, name in p.steps}
    all_pts = list(tas.seed.tiles) + list(induced)
    x0 = min(q[0] for q in all_pts) - window_margin
    x1 = max(q[0] for q in all_pts) + window_margin
    y0 = min(q[1] for q in all_pts) - window_margin
    y1 = max(q[1] for q in all_pts) + window_margin
    bind = _binding_table(tas)

    start = frozenset(tas.seed.tiles.items())
    seen = {start}
    queue = deque([start])
    visited = 0
    while queue:
        state = queue.popleft()
        visited += 1
        if visited > max_assemblies:
            raise RuntimeError("oracle budget exhausted")
        tiles = dict(state)
        for (q, name) in list(tiles.items()):
            for d in DIRS:
                r = (q[0] + d[0], q[1] + d[1])
                if r in tiles or not (x0 <= r[0] <= x1 and y0 <= r[1] <= y1):
                    continue
                for cand in bind[(name, d)]:
                    if induced.get(r, cand) != cand:
                        return True
                    nxt = state | {(r, cand)}
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return False


# ---------------------------------------------------------------------------
# random generators


def random_system(rng: random.Random, max_tiles: int = 3, labels: str = "abc") -> TileAssemblySystem:
    glues = [INERT] + [Glue(ch, 1) for ch in labels]
    n = rng.randint(1, max_tiles)
    tiles = []
    for i in range(n):
        tiles.append(TileType(f"t{i}", *(rng.choice(glues) for _ in range(4))))
    tiles = tuple(tiles)
    seed_name = rng.choice(tiles).name
    seed = Assembly({(0, 0): seed_name}, {t.name: t for t in tiles}, check=False)
    return TileAssemblySystem(tiles, seed)


def random_producible_path(tas: TileAssemblySystem, rng: random.Random,
                           max_len: int = 24, half: int = 14):
    """One random producible simple path (may be empty if nothing attaches)."""
    bind = _binding_table(tas)
    seed_tiles = tas.seed.tiles
    starts = []
    for q, sname in sorted(seed_tiles.items()):
        for d in DIRS:
            p1 = (q[0] + d[0], q[1] + d[1])
            if p1 in seed_tiles:
                continue
            for name in bind[(sname, d)]:
                starts.append((p1, name))
    if not starts:
        return None
    steps = [rng.choice(starts)]
    occupied = {steps[0][0]}
    while len(steps) < max_len:
        last_pos, last_name = steps[-1]
        moves = []
        for d in DIRS:
            q = (last_pos[0] + d[0], last_pos[1] + d[1])
            if q in occupied or q in seed_tiles or abs(q[0]) > half or abs(q[1]) > half:
                continue
            for name in bind[(last_name, d)]:
                moves.append((q, name))
        if not moves:
            break
        step = rng.choice(moves)
        steps.append(step)
        occupied.add(step[0])
    return tuple(steps)


def truncate_at_highest(steps):
    """Prefix ending at the first tile achieving the maximum height."""
    if not steps:
        return steps
    top = max(q[1] for q, _ in steps)
    for k, (q, _) in enumerate(steps):
        if q[1] == top:
            return steps[: k + 1]
    return steps
