"""Window movies along vertical boundaries and periodic separators, the
path-adapted window-movie pump, the diet-path check, cage-free separators,
and exact big-integer bound calculators.

A movie is the ordered list of glue events a growing path places on a window:
(position, glue label, crossing direction), in growth order. Two windows with
movies equal up to a translation admit either an infinite pumping of the
inter-window segment or a blocking assembly grown from the repeated chunk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from . import certify
from .errors import PreconditionFailed, WindowClipError
from .geometry import Point, Vector, add, bounding_box, neg, scale, sub
from .model import Assembly, PathAssembly, TileAssemblySystem, VECTOR_SIDE, interacts
from .pumping import ConflictAt, Infinite, decide_pumping

Clip = tuple[Point, Point]


@dataclass(frozen=True)
class VerticalWindow:
    """Dual vertical line between columns x_boundary and x_boundary + 1."""

    x_boundary: int
    clip: Optional[Clip] = None

    @property
    def offset(self) -> Point:
        return (self.x_boundary, 0)

    def translate(self, v: Vector) -> "VerticalWindow":
        return VerticalWindow(self.x_boundary + v[0], self.clip)

    def points(self) -> tuple[Point, ...]:
        return ()


@dataclass(frozen=True)
class PeriodicSeparator:
    """Bi-infinite periodic vertex path: base replicated by multiples of v,
    shifted by `offset`, materialized inside `clip`."""

    base: tuple[Point, ...]
    v: Vector
    offset: Vector
    clip: Clip

    def translate(self, u: Vector) -> "PeriodicSeparator":
        return PeriodicSeparator(self.base, self.v, add(self.offset, u), self.clip)

    def points(self) -> tuple[Point, ...]:
        (x0, y0), (x1, y1) = self.clip
        out = []
        period = len(self.base)
        height = max(1, abs(self.v[1]))
        reps = (y1 - y0) // height + 2
        for r in range(-reps, reps + 1):
            for b in self.base:
                q = add(add(b, scale(self.v, r)), self.offset)
                if x0 <= q[0] <= x1 and y0 <= q[1] <= y1:
                    out.append(q)
        return tuple(dict.fromkeys(out))


Window = Union[VerticalWindow, PeriodicSeparator]


@dataclass(frozen=True)
class MovieEvent:
    pos: Point
    label: str
    direction: str  # unit step direction of the bond placement: N/E/S/W


@dataclass(frozen=True)
class Movie:
    events: tuple[MovieEvent, ...]

    def __len__(self) -> int:
        return len(self.events)


def _path_bonds(tas: TileAssemblySystem, p: PathAssembly,
                include_seed_junction: bool) -> list[tuple[int, Point, Point, str]]:
    """(step index, from, to, glue label) for every bond P places, in order.

    Step 0 is the seed junction bond when included.
    """
    bonds = []
    tile_map = tas.tile_map
    if include_seed_junction and len(p) >= 1:
        p1 = p.pos(1)
        t1 = tile_map[p.name(1)]
        for d, side in (((0, 1), "N"), ((1, 0), "E"), ((0, -1), "S"), ((-1, 0), "W")):
            q = add(p1, neg(d))
            sname = tas.seed.tiles.get(q)
            if sname is not None and interacts(tile_map[sname], side, t1):
                bonds.append((0, q, p1, tile_map[sname].glue(side).label))
                break
    for k in range(1, len(p)):
        a, b = p.pos(k), p.pos(k + 1)
        side = VECTOR_SIDE[sub(b, a)]
        bonds.append((k, a, b, tile_map[p.name(k)].glue(side).label))
    return bonds


def _bond_event(window: Window, frm: Point, to: Point, label: str,
                sep_points: Optional[frozenset] = None) -> Optional[MovieEvent]:
    if isinstance(window, VerticalWindow):
        xb = window.x_boundary
        if {frm[0], to[0]} == {xb, xb + 1} and frm[1] == to[1]:
            west = frm if frm[0] == xb else to
            return MovieEvent(west, label, VECTOR_SIDE[sub(to, frm)])
        return None
    pts = sep_points if sep_points is not None else frozenset(window.points())
    if frm in pts or to in pts:
        anchor = frm if frm in pts else to
        return MovieEvent(anchor, label, VECTOR_SIDE[sub(to, frm)])
    return None


def record_movie(tas: TileAssemblySystem, p: PathAssembly, window: Window,
                 include_seed_junction: bool = True) -> Movie:
    """Movie of the path prefix on the window, events in growth order."""
    if window.clip is not None:
        (cx0, cy0), (cx1, cy1) = window.clip
        pts = list(tas.seed.tiles) + [q for q, _ in p.steps]
        (bx0, by0), (bx1, by1) = bounding_box(pts)
        if bx0 < cx0 or by0 < cy0 or bx1 > cx1 or by1 > cy1:
            raise WindowClipError("window clip does not cover the assembly")
    sep_points = frozenset(window.points()) if isinstance(window, PeriodicSeparator) else None
    events = []
    for _, frm, to, label in _path_bonds(tas, p, include_seed_junction):
        ev = _bond_event(window, frm, to, label, sep_points)
        if ev is not None:
            events.append(ev)
    return Movie(tuple(events))


def movies_equal_upto(m1: Movie, m2: Movie, v: Vector) -> bool:
    """Exact event-by-event equality after translating m1's positions by v."""
    if len(m1.events) != len(m2.events):
        return False
    for a, b in zip(m1.events, m2.events):
        if add(a.pos, v) != b.pos or a.label != b.label or a.direction != b.direction:
            return False
    return True


# ---------------------------------------------------------------------------
# the path-adapted window-movie pump


@dataclass(frozen=True)
class WmlPumpable:
    certificate: certify.PumpableCertificate
    u: int
    v: int


@dataclass(frozen=True)
class WmlFragile:
    certificate: certify.FragileCertificate
    u: int
    v: int


@dataclass(frozen=True)
class NotApplicable:
    reason: str


WmlResult = Union[WmlPumpable, WmlFragile, NotApplicable]


def _windows_share_edges(w1: Window, w2: Window) -> bool:
    if isinstance(w1, VerticalWindow) and isinstance(w2, VerticalWindow):
        return w1.x_boundary == w2.x_boundary
    if isinstance(w1, PeriodicSeparator) and isinstance(w2, PeriodicSeparator):
        return bool(set(w1.points()) & set(w2.points()))
    return False


def _seed_one_side(tas: TileAssemblySystem, w1: Window, w2: Window) -> bool:
    if isinstance(w1, VerticalWindow) and isinstance(w2, VerticalWindow):
        lo = min(w1.x_boundary, w2.x_boundary)
        hi = max(w1.x_boundary, w2.x_boundary)
        xs = [q[0] for q in tas.seed.tiles]
        return max(xs) <= lo or min(xs) > hi
    pts = set(w1.points()) | set(w2.points())
    return not (pts & set(tas.seed.tiles))


def _movie_prefixes(tas: TileAssemblySystem, p: PathAssembly, window: Window):
    """Per-step annotated events: list of (step index, MovieEvent)."""
    sep_points = frozenset(window.points()) if isinstance(window, PeriodicSeparator) else None
    out = []
    for step, frm, to, label in _path_bonds(tas, p, include_seed_junction=True):
        ev = _bond_event(window, frm, to, label, sep_points)
        if ev is not None:
            out.append((step, ev))
    return out


def wml_pump(tas: TileAssemblySystem, p: PathAssembly, w: Window, v: Vector) -> WmlResult:
    """Find the first prefix with equal movies on w and w+v, pump the segment
    between the last crossing tiles, and convert the result into a
    certificate (pumpable, or fragile via growing the repeat ladder first)."""
    if v == (0, 0):
        return NotApplicable("zero translation")
    w2 = w.translate(v)
    if _windows_share_edges(w, w2):
        return NotApplicable("windows share edges")
    if not _seed_one_side(tas, w, w2):
        return NotApplicable("seed not on one side of both windows")

    ann1 = _movie_prefixes(tas, p, w)
    ann2 = _movie_prefixes(tas, p, w2)

    # first prefix whose movies are equal up to v AND define a usable segment
    # (later prefixes are scanned past degenerate or type-mismatched ones)
    chosen = None
    why = "movies never equal up to the translation"
    for k in range(1, len(p) + 1):
        m1 = Movie(tuple(ev for s, ev in ann1 if s < k))
        m2 = Movie(tuple(ev for s, ev in ann2 if s < k))
        if not (len(m1) and len(m2) and movies_equal_upto(m1, m2, v)):
            continue
        last1 = max(s for s, _ in ann1 if s < k)
        last2 = max(s for s, _ in ann2 if s < k)
        u = last1 + 1  # the later tile of the crossing bond
        v_idx = last2 + 1
        if not (1 <= u < v_idx <= len(p)):
            why = f"degenerate segment indices ({u}, {v_idx})"
            continue
        if p.name(u) != p.name(v_idx):
            why = "segment endpoint tiles differ in type"
            continue
        if sub(p.pos(v_idx), p.pos(u)) != v:
            why = "crossing tiles are not translates by v"
            continue
        chosen = (k, u, v_idx)
        break
    if chosen is None:
        return NotApplicable(why)
    k_found, u, v_idx = chosen

    decision = decide_pumping(tas, p, u, v_idx)
    if isinstance(decision, Infinite):
        cert = certify.PumpableCertificate(u, v_idx, decision.horizon)
        if not certify.verify_pumpable(tas, p, cert):
            return NotApplicable("pumpable certificate failed verification")
        return WmlPumpable(cert, u, v_idx)
    cert = _gamma_first_fragile(tas, p, w, v, k_found, decision)
    if cert is None:
        return NotApplicable("conflicting pumping but no realizable blocking assembly")
    return WmlFragile(cert, u, v_idx)


def _gamma_first_fragile(tas: TileAssemblySystem, p: PathAssembly, w: Window,
                         v: Vector, k: int,
                         conflict: ConflictAt) -> Optional[certify.FragileCertificate]:
    """Grow the window-repeat ladder first so the path can no longer complete.

    The prefix P_[1,k] splits geometrically at the two windows into head,
    middle, and tail chunks; the ladder repeats the middle (and pushes the
    tail) by multiples of v. When that assembly is realizable and disagrees
    with the path at a path position, it is a fragility witness.
    """
    from .engine import greedy_growth_order

    if not isinstance(w, VerticalWindow):
        return None
    x1 = w.x_boundary
    x2 = x1 + v[0]
    if x1 > x2:
        x1, x2 = x2, x1
        v = neg(v)
    prefix = p.induced_tiles(1, k)
    head = {q: nm for q, nm in prefix.items() if q[0] <= x1}
    middle = {q: nm for q, nm in prefix.items() if x1 < q[0] <= x2}
    tail = {q: nm for q, nm in prefix.items() if q[0] > x2}

    reps = abs(conflict.iteration) + 2
    induced = p.induced_tiles()
    for n in range(1, reps + 1):
        # one window-repeat swap per level: middle copies 0..n, tail pushed n
        target: dict[Point, str] = dict(tas.seed.tiles)
        ok = True

        def put(q: Point, nm: str) -> bool:
            if target.get(q, nm) != nm:
                return False
            target[q] = nm
            return True

        for q, nm in head.items():
            ok = ok and put(q, nm)
        for m in range(0, n + 1):
            for q, nm in middle.items():
                ok = ok and put(add(q, scale(v, m)), nm)
        for q, nm in tail.items():
            ok = ok and put(add(q, scale(v, n)), nm)
        if not ok:
            continue
        point = None
        for q, nm in target.items():
            idx = p.index_of(q)
            if idx is not None and p.name(idx) != nm:
                if point is None or (q[1], q[0]) < (point[1], point[0]):
                    point = q
        if point is None:
            continue
        order = greedy_growth_order(tas, target)
        if order is None:
            continue
        cert = certify.FragileCertificate(tuple(order), point)
        if certify.verify_fragile(tas, p, cert):
            return cert
    return None


# ---------------------------------------------------------------------------
# diet paths


@dataclass(frozen=True)
class Escape:
    side: str  # N/E/S/W
    index: int


@dataclass(frozen=True)
class RepeatFound:
    w1: VerticalWindow
    w2: VerticalWindow
    v: Vector
    escape: Escape


@dataclass(frozen=True)
class Exhausted:
    reason: str


DietResult = Union[Escape, RepeatFound, Exhausted]


def diet_rectangle(tas: TileAssemblySystem, height: Optional[int] = None,
                   width: Optional[int] = None) -> Clip:
    """Desk-scale danger-zone rectangle centered on the seed."""
    t = len(tas.tileset)
    sigma = len(tas.seed.tiles)
    if height is None:
        height = 2 * t + sigma
    if width is None:
        width = max(8, 4 * height)
    (x0, y0), (x1, y1) = bounding_box(tas.seed.tiles)
    cx = (x0 + x1) // 2
    cy = (y0 + y1) // 2
    half_w = width // 2
    half_h = height // 2
    return ((cx - half_w, cy - half_h), (cx - half_w + width - 1, cy - half_h + height - 1))


def diet_check(tas: TileAssemblySystem, p: PathAssembly,
               height: Optional[int] = None, width: Optional[int] = None) -> DietResult:
    """First escape of the danger zone; east/west escapes are scanned for a
    repeated vertical-window movie pair ready for wml_pump."""
    (rx0, ry0), (rx1, ry1) = diet_rectangle(tas, height, width)
    escape = None
    for k in range(1, len(p) + 1):
        (x, y) = p.pos(k)
        if x > rx1:
            escape = Escape("E", k)
        elif x < rx0:
            escape = Escape("W", k)
        elif y > ry1:
            escape = Escape("N", k)
        elif y < ry0:
            escape = Escape("S", k)
        if escape:
            break
    if escape is None:
        return Exhausted("path never leaves the rectangle")
    if escape.side in ("N", "S"):
        return escape

    prefix = p.prefix(escape.index)
    sx0, sx1 = min(q[0] for q in tas.seed.tiles), max(q[0] for q in tas.seed.tiles)
    ex = p.pos(escape.index)[0]
    if escape.side == "E":
        boundaries = list(range(sx1, ex))
    else:
        boundaries = list(range(ex, sx0))[::-1]
    recorded = []
    for xb in boundaries:
        movie = record_movie(tas, prefix, VerticalWindow(xb))
        if len(movie):
            recorded.append((xb, movie))
    for a in range(len(recorded)):
        for b in range(a + 1, len(recorded)):
            xa, ma = recorded[a]
            xb, mb = recorded[b]
            shift = (xb - xa, 0)
            if movies_equal_upto(ma, mb, shift):
                return RepeatFound(VerticalWindow(xa), VerticalWindow(xb), shift, escape)
    return Exhausted(f"no repeated movie among {len(recorded)} windows")


# ---------------------------------------------------------------------------
# cage-free separators


def cagefree_separators(p: PathAssembly, n: int, v: Vector, seed: Assembly,
                        clip_margin: int = 2) -> list[PeriodicSeparator]:
    """One periodic separator per v-stripe along the cage-free suffix,
    skipping stripes whose separator touches the seed or the pre-suffix."""
    if v[1] <= 0:
        raise PreconditionFailed("separator vector must point north (y > 0)")
    if not (1 <= n <= len(p)):
        raise PreconditionFailed(f"suffix index {n} out of range")
    for m in range(n, len(p)):
        q = add(p.pos(m), v)
        idx = p.index_of(q)
        if idx is not None and p.name(idx) != p.name(m):
            # intersecting while agreeing is fine; a conflict is not cage-free
            raise PreconditionFailed("translated suffix conflicts with the path")

    # shortest base path from P_n toward P_n + v, vertical steps first,
    # half-open (the endpoint is the next period's start)
    base: list[Point] = []
    cur = p.pos(n)
    for _ in range(abs(v[1])):
        base.append(cur)
        cur = add(cur, (0, 1 if v[1] > 0 else -1))
    for _ in range(abs(v[0])):
        base.append(cur)
        cur = add(cur, (1 if v[0] > 0 else -1, 0))

    pts = list(seed.tiles) + [q for q, _ in p.steps]
    (bx0, by0), (bx1, by1) = bounding_box(pts)
    clip = ((bx0 - clip_margin, by0 - clip_margin), (bx1 + clip_margin, by1 + clip_margin))

    blocked = set(seed.tiles) | {p.pos(m) for m in range(1, n)}
    y_base = p.pos(n)[1]
    top = max(q[1] for q in p.positions)
    out: list[PeriodicSeparator] = []
    stripe = 0
    while y_base + stripe * v[1] <= top:
        lo = y_base + stripe * v[1]
        hi = lo + v[1]
        anchor = None
        for m in range(n, len(p) + 1):
            if lo <= p.pos(m)[1] < hi:
                anchor = m
                break
        stripe += 1
        if anchor is None:
            continue
        sep = PeriodicSeparator(tuple(base), v, sub(p.pos(anchor), p.pos(n)), clip)
        if set(sep.points()) & blocked:
            continue
        out.append(sep)
    return out


# ---------------------------------------------------------------------------
# exact bound calculators


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: int
    formula: str


_BOUNDS = {
    "f_b": (("tiles", "n"), "((tiles+1)^n)! + 1",
            lambda tiles, n: math.factorial((tiles + 1) ** n) + 1),
    "B_seed": (("tiles", "seed_size"), "2*tiles + seed_size",
               lambda tiles, seed_size: 2 * tiles + seed_size),
    "B_d": (("tiles", "seed_size"), "seed_size + (3*tiles + seed_size + 5)*tiles + 1",
            lambda tiles, seed_size: seed_size + (3 * tiles + seed_size + 5) * tiles + 1),
    "B_d_min": (("tiles",), "2*tiles + 2", lambda tiles: 2 * tiles + 2),
    "B_s": (("tiles", "w", "h"), "(2*tiles)^(w+h)",
            lambda tiles, w, h: (2 * tiles) ** (w + h)),
    "N_cagefree": (("tiles", "n", "v_l1"), "n + v_l1*((tiles^(v_l1^2))! + 1)",
                   lambda tiles, n, v_l1: n + v_l1 * (math.factorial(tiles ** (v_l1 ** 2)) + 1)),
}


def bound(name: str, **params: int) -> BoundReport:
    """Exact arbitrary-precision evaluation of a named bound formula."""
    if name not in _BOUNDS:
        raise KeyError(f"unknown bound {name!r}; known: {sorted(_BOUNDS)}")
    wanted, formula, fn = _BOUNDS[name]
    for key in wanted:
        if key not in params:
            raise PreconditionFailed(f"bound {name!r} needs parameter {key!r}")
        val = params[key]
        if not isinstance(val, int) or val <= 0:
            raise PreconditionFailed(f"parameter {key!r} must be a positive integer")
    extra = set(params) - set(wanted)
    if extra:
        raise PreconditionFailed(f"unexpected parameters {sorted(extra)}")
    return BoundReport(name, fn(**params), formula)


def bound_names() -> tuple[str, ...]:
    return tuple(sorted(_BOUNDS))


def bound_params(name: str) -> tuple[str, ...]:
    return _BOUNDS[name][0]
