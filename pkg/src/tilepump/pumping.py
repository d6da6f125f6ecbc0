"""The pumping operator, the bounded infinite-growth decision, and the
bounded breadth-first fragility search.

The pumping of P between i and j is the eventually periodic sequence
Q_k = P_k for k < i and Q_k = P_{i+((k−i) mod (j−i))} + ⌊(k−i)/(j−i)⌋·v with
v the vector from P_i to P_j. Iteration n ≥ 1 of the pumping is the translate
of the closed segment P_[i,j] by n·v; whether the pumping can grow forever is
decided by simulating finitely many iterations, enough that any translate past
the horizon has a bounding box disjoint from everything already placed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import PreconditionFailed, SearchBudgetExhausted, TypeMismatch, ZeroPeriod
from .geometry import Point, Vector, add, bounding_box, diam1, linf, scale, sub
from .model import Assembly, PathAssembly, TileAssemblySystem, attachable

OBSTACLE = "Obstacle"
SELF_EARLIER = "SelfEarlier"


@dataclass(frozen=True)
class PumpedSequence:
    """Lazy view of the pumping of `base` between indices i < j."""

    base: PathAssembly
    i: int
    j: int
    vector: Vector

    def tile(self, k: int) -> tuple[Point, str]:
        """Q_k for 1-based k (defined for every k ≥ 1)."""
        i, j = self.i, self.j
        if k < i:
            return self.base.steps[k - 1]
        period = j - i
        src = i + ((k - i) % period)
        reps = (k - i) // period
        pos, name = self.base.steps[src - 1]
        return add(pos, scale(self.vector, reps)), name

    def prefix(self, n: int) -> list[tuple[Point, str]]:
        return [self.tile(k) for k in range(1, n + 1)]

    def iteration_of(self, k: int) -> int:
        """Which translate of the closed segment P_[i,j] holds Q_k (0 = original)."""
        if k <= self.j:
            return 0
        period = self.j - self.i
        return -((self.j - k) // period)  # ceil((k − j) / period)


def pumping(p: PathAssembly, i: int, j: int) -> PumpedSequence:
    """Validated pumping of p between i and j."""
    n = len(p)
    if not (1 <= i < j <= n):
        raise PreconditionFailed(f"need 1 ≤ i < j ≤ |P|, got i={i}, j={j}, |P|={n}")
    if p.name(i) != p.name(j):
        raise TypeMismatch(f"P_{i} is {p.name(i)!r} but P_{j} is {p.name(j)!r}")
    v = sub(p.pos(j), p.pos(i))
    if v == (0, 0):
        raise ZeroPeriod(f"P_{i} and P_{j} share position {p.pos(i)}")
    return PumpedSequence(p, i, j, v)


@dataclass(frozen=True)
class Infinite:
    """No conflict within the decision horizon: the pumping grows forever."""

    horizon: int  # iterations simulated (M)
    self_horizon: int  # iteration deltas covered for self-conflicts (D)


@dataclass(frozen=True)
class ConflictAt:
    point: Point
    iteration: int
    against: str  # OBSTACLE or SELF_EARLIER


PumpDecision = Infinite | ConflictAt


def decision_horizons(obstacles: Mapping[Point, str], period_positions: list[Point], v: Vector) -> tuple[int, int]:
    """(M, D): iteration horizon and self-conflict delta bound.

    Past M iterations a translate's bounding box clears the obstacles; past D
    it clears any other single translate, so simulating M ≥ D+1 iterations and
    finding no conflict settles the infinite case.
    """
    step = max(1, linf(v))
    union = list(obstacles) + period_positions
    m = (diam1(union) + diam1(period_positions)) // step + 2
    d = diam1(period_positions) // step + 1
    return m, d


def _obstacle_map(tas: TileAssemblySystem, p: PathAssembly, lo: int,
                  extra: Optional[Assembly | Mapping[Point, str]]) -> dict[Point, str]:
    obs = dict(tas.seed.tiles)
    obs.update(p.induced_tiles(1, lo - 1))
    if extra is not None:
        items = extra.tiles if isinstance(extra, Assembly) else extra
        for q, name in items.items():
            obs[q] = name
    return obs


def decide_pumping(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                   extra_obstacles: Optional[Assembly | Mapping[Point, str]] = None) -> PumpDecision:
    """Grow the pumping against seed ∪ P_[1,i−1] ∪ extra obstacles.

    Returns Infinite when no conflict occurs within the decision horizon,
    otherwise the first conflict in growth order.
    """
    q = pumping(p, i, j)
    obstacles = _obstacle_map(tas, p, i, extra_obstacles)
    segment = [p.pos(k) for k in range(i, j + 1)]
    horizon, delta = decision_horizons(obstacles, segment, q.vector)
    last_k = j + horizon * (j - i)
    placed: dict[Point, str] = {}
    for k in range(i, last_k + 1):
        pos, name = q.tile(k)
        hit = obstacles.get(pos)
        if hit is not None and hit != name:
            return ConflictAt(pos, q.iteration_of(k), OBSTACLE)
        mine = placed.get(pos)
        if mine is not None and mine != name:
            return ConflictAt(pos, q.iteration_of(k), SELF_EARLIER)
        if hit is None and mine is None:
            placed[pos] = name
    return Infinite(horizon, delta)


def materialize_pumping(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                        iterations: int,
                        extra_obstacles: Optional[Assembly | Mapping[Point, str]] = None,
                        stop_at_conflict: bool = True) -> tuple[list[tuple[Point, str]], Optional[ConflictAt]]:
    """Growth-ordered new tiles of the pumping, up to `iterations` translates.

    Tiles landing on already-occupied agreeing positions are skipped (they are
    intersections, not attachments). Returns the placements plus the first
    conflict, if one occurs within the range.
    """
    q = pumping(p, i, j)
    obstacles = _obstacle_map(tas, p, i, extra_obstacles)
    last_k = j + iterations * (j - i)
    placed: dict[Point, str] = {}
    order: list[tuple[Point, str]] = []
    for k in range(i, last_k + 1):
        pos, name = q.tile(k)
        hit = obstacles.get(pos, placed.get(pos))
        if hit is not None:
            if hit != name:
                against = OBSTACLE if pos in obstacles else SELF_EARLIER
                c = ConflictAt(pos, q.iteration_of(k), against)
                if stop_at_conflict:
                    return order, c
                continue
            continue
        placed[pos] = name
        order.append((pos, name))
    return order, None


def fragility_witness(tas: TileAssemblySystem, p: PathAssembly,
                      window_margin: int = 2,
                      max_assemblies: int = 100_000) -> Optional[tuple[list[tuple[Point, str]], Point]]:
    """Bounded BFS over producible assemblies looking for one that conflicts
    with the assembly induced by p.

    Returns (growth order, conflict point) for the first conflicting assembly
    in search order, None when the windowed search space is exhausted without
    finding one, and raises SearchBudgetExhausted past `max_assemblies`.

    A path is fragile iff some producible assembly conflicts with it: a
    terminal assembly omitting a path position without conflicting would still
    admit the path's next attachment there, contradicting terminality.
    """
    (x0, y0), (x1, y1) = bounding_box(list(tas.seed.tiles) + [pt for pt, _ in p.steps])
    wmin = (x0 - window_margin, y0 - window_margin)
    wmax = (x1 + window_margin, y1 + window_margin)
    induced = p.induced_tiles()
    tileset = tas.tile_map
    seed_items = tuple(sorted(tas.seed.tiles.items()))

    start = frozenset(seed_items)
    seen = {start}
    queue: deque[tuple[frozenset, tuple]] = deque([(start, ())])
    visited = 0
    while queue:
        state, order = queue.popleft()
        visited += 1
        if visited > max_assemblies:
            raise SearchBudgetExhausted(f"more than {max_assemblies} assemblies enumerated")
        tiles = dict(state)
        asm = Assembly(tiles, tileset, check=False)
        frontier: set[Point] = set()
        for q in tiles:
            for d in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                r = add(q, d)
                if r not in tiles and wmin[0] <= r[0] <= wmax[0] and wmin[1] <= r[1] <= wmax[1]:
                    frontier.add(r)
        for r in sorted(frontier):
            for t in tas.tileset:
                if not attachable(asm, r, t):
                    continue
                want = induced.get(r)
                if want is not None and want != t.name:
                    return list(order) + [(r, t.name)], r
                nxt = state | {(r, t.name)}
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, order + ((r, t.name),)))
    return None
