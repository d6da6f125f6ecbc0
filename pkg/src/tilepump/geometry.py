"""Exact ℤ² geometry: points, direction order, line sides, dual rays and windowed cuts.

Everything here is plain integer arithmetic on (x, y) tuples; y grows northward.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import InvalidCut, InvalidVector

Point = tuple[int, int]
Vector = tuple[int, int]

EAST: Vector = (1, 0)
NORTH: Vector = (0, 1)
WEST: Vector = (-1, 0)
SOUTH: Vector = (0, -1)
UNIT_DIRS = (EAST, NORTH, WEST, SOUTH)

# counterclockwise rank of each unit direction, E=0, N=1, W=2, S=3
_CCW = {EAST: 0, NORTH: 1, WEST: 2, SOUTH: 3}

NON_NEGATIVE = "NonNegative"
NEGATIVE = "Negative"


def add(p: Point, v: Vector) -> Point:
    return (p[0] + v[0], p[1] + v[1])


def sub(a: Point, b: Point) -> Vector:
    """Vector from b to a (a − b)."""
    return (a[0] - b[0], a[1] - b[1])


def neg(v: Vector) -> Vector:
    return (-v[0], -v[1])


def scale(v: Vector, k: int) -> Vector:
    return (v[0] * k, v[1] * k)


def manhattan(a: Point, b: Point) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def linf(v: Vector) -> int:
    return max(abs(v[0]), abs(v[1]))


def adjacent(a: Point, b: Point) -> bool:
    """4-adjacency: the two points share a grid edge."""
    return manhattan(a, b) == 1


def bounding_box(points: Iterable[Point]) -> tuple[Point, Point]:
    pts = list(points)
    if not pts:
        raise ValueError("bounding box of empty set")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return (min(xs), min(ys)), (max(xs), max(ys))


def diam1(points: Iterable[Point]) -> int:
    """Manhattan diameter: max pairwise L1 distance (0 for singletons)."""
    pts = list(points)
    if not pts:
        return 0
    # the L1 diameter equals the max over the two rotated-coordinate spreads
    s = [p[0] + p[1] for p in pts]
    d = [p[0] - p[1] for p in pts]
    return max(max(s) - min(s), max(d) - min(d))


def line_side(a: Point, v: Vector, x: Point) -> str:
    """Side of the line through `a` with direction `v`: sign of det(v, ax)."""
    if v == (0, 0):
        raise InvalidVector("line direction must be non-zero")
    det = v[0] * (x[1] - a[1]) - v[1] * (x[0] - a[0])
    return NON_NEGATIVE if det >= 0 else NEGATIVE


def ccw_strictly_between(start: Vector, end: Vector, probe: Vector) -> bool:
    """True iff `probe` lies strictly inside the CCW-open arc from `start` to `end`.

    All three must be unit directions. With start == end the arc is empty.
    """
    s, e, p = _CCW[start], _CCW[end], _CCW[probe]
    if s == e:
        return False
    span = (e - s) % 4
    off = (p - s) % 4
    return 0 < off < span


@dataclass(frozen=True)
class HorizontalDualRay:
    """Dual ray along the inter-row boundary between rows `level` and `level+1`.

    `direction` is +1 (east) or −1 (west); the ray covers columns from
    `x_start` onward in that direction, inclusive.
    """

    level: int
    x_start: int
    direction: int

    def covers_column(self, x: int) -> bool:
        if self.direction > 0:
            return x >= self.x_start
        return x <= self.x_start


def step_crosses_ray(p_from: Point, p_to: Point, ray: HorizontalDualRay) -> bool:
    """Does the unit step p_from→p_to use a grid edge removed by the ray?"""
    if p_from[0] != p_to[0]:
        return False
    lo = min(p_from[1], p_to[1])
    if abs(p_from[1] - p_to[1]) != 1:
        return False
    return lo == ray.level and ray.covers_column(p_from[0])


@dataclass(frozen=True)
class VertexPathGenerator:
    points: tuple[Point, ...]


@dataclass(frozen=True)
class DualRayGenerator:
    ray: HorizontalDualRay


@dataclass(frozen=True)
class LineGenerator:
    anchor: Point
    direction: Vector


CutGenerator = Union[VertexPathGenerator, DualRayGenerator, LineGenerator]


@dataclass
class Cut:
    """Windowed cut of ℤ²: connected components after removing generator edges.

    `components` partitions every window point; `labels` maps each point to its
    component index; `infinite_index` is the border-touching component (the one
    holding the smallest border point when a line generator splits the border).
    """

    window_min: Point
    window_max: Point
    components: list[frozenset[Point]]
    labels: dict[Point, int]
    infinite_index: int
    border_touching: frozenset[int]

    def component_of(self, p: Point) -> int:
        if p not in self.labels:
            raise InvalidCut(f"point {p} outside the cut window")
        return self.labels[p]

    def is_infinite(self, p: Point) -> bool:
        return self.component_of(p) == self.infinite_index


def _generator_anchors(gen: CutGenerator) -> list[Point]:
    if isinstance(gen, VertexPathGenerator):
        return list(gen.points)
    if isinstance(gen, DualRayGenerator):
        r = gen.ray
        return [(r.x_start, r.level), (r.x_start, r.level + 1)]
    return [gen.anchor]


def region_cut(generators: Sequence[CutGenerator], window_margin: int = 2) -> Cut:
    """Cut the window graph by the generators and label components.

    Vertex paths lose all incident edges (their vertices become singletons);
    dual rays remove the vertical edges they cross; line generators remove
    every edge whose endpoints fall on opposite sides of the line.
    """
    if not generators:
        raise InvalidCut("at least one generator required")
    if window_margin < 2:
        raise InvalidCut("window margin must be at least 2")
    anchors = [p for g in generators for p in _generator_anchors(g)]
    (x0, y0), (x1, y1) = bounding_box(anchors)
    wmin = (x0 - window_margin, y0 - window_margin)
    wmax = (x1 + window_margin, y1 + window_margin)

    blocked_vertices: set[Point] = set()
    rays: list[HorizontalDualRay] = []
    lines: list[LineGenerator] = []
    for g in generators:
        if isinstance(g, VertexPathGenerator):
            blocked_vertices.update(g.points)
        elif isinstance(g, DualRayGenerator):
            rays.append(g.ray)
        else:
            lines.append(g)

    def edge_open(a: Point, b: Point) -> bool:
        if a in blocked_vertices or b in blocked_vertices:
            return False
        for ray in rays:
            if step_crosses_ray(a, b, ray):
                return False
        for ln in lines:
            if line_side(ln.anchor, ln.direction, a) != line_side(ln.anchor, ln.direction, b):
                return False
        return True

    labels: dict[Point, int] = {}
    components: list[frozenset[Point]] = []
    for sx in range(wmin[0], wmax[0] + 1):
        for sy in range(wmin[1], wmax[1] + 1):
            start = (sx, sy)
            if start in labels:
                continue
            idx = len(components)
            comp = []
            queue = deque([start])
            labels[start] = idx
            while queue:
                p = queue.popleft()
                comp.append(p)
                for d in UNIT_DIRS:
                    q = add(p, d)
                    if not (wmin[0] <= q[0] <= wmax[0] and wmin[1] <= q[1] <= wmax[1]):
                        continue
                    if q in labels or not edge_open(p, q):
                        continue
                    labels[q] = idx
                    queue.append(q)
            components.append(frozenset(comp))

    border = set()
    for x in range(wmin[0], wmax[0] + 1):
        border.add((x, wmin[1]))
        border.add((x, wmax[1]))
    for y in range(wmin[1], wmax[1] + 1):
        border.add((wmin[0], y))
        border.add((wmax[0], y))
    touching = frozenset(labels[p] for p in border)
    infinite_index = labels[min(border)]
    return Cut(wmin, wmax, components, labels, infinite_index, touching)
