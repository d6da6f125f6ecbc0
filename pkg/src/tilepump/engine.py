"""Nice U-turns, the forward/backward stake-path algorithm, and the
end-to-end analysis pipeline.

The algorithm takes a path P and a pair (i, j) and alternates two modes. In
forward mode it first tries to pump the current candidate segment; if that
fails it grows a branch — the suffix of P from the current anchor, translated
by the vector from P_i to P_j — alongside the assembly, stopping at the first
shared run where P's own continuation exits strictly left of the branch.
Backward mode grows the opposite translation against the stake shifted back.
Every stop swaps modes and hands over a new candidate pair; every decisive
event is converted into an independently checkable certificate.

State bookkeeping keeps the stake path in a canonical frame: pieces grown in
forward mode are stored as translated P-segments, pieces grown in backward
mode as plain P-segments, so that the stake is exactly "segments of P and
their translates" and the backward working frame is the canonical stake
shifted south.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from . import certify
from .budget import check_budget
from .errors import InvariantViolation, LemmaViolation, PreconditionFailed, SearchBudgetExhausted
from .geometry import (
    Point,
    Vector,
    add,
    ccw_strictly_between,
    neg,
    step_crosses_ray,
    sub,
)
from .model import Assembly, PathAssembly, TileAssemblySystem, rows_above
from .pumping import (
    ConflictAt,
    Infinite,
    decide_pumping,
    decision_horizons,
    fragility_witness,
    pumping,
)
from .visibility import (
    EAST_SIDE,
    NORTH_OUTPUT,
    WEST_SIDE,
    output_glue_visible_on_prefix,
    visibility_report,
)

FORWARD = "Forward"
BACKWARD = "Backward"

FROM_P = "FromP"
FROM_P_TRANSLATED = "FromPTranslated"

NORTHWARD = "N"
SOUTHWARD = "S"

DISJOINT = "Disjoint"
TOUCHES_SAME_SIDE = "TouchesSameSide"


@dataclass(frozen=True)
class Crosses:
    point: Point


@dataclass(frozen=True)
class StakePiece:
    """Contiguous P-index range [m_start, m_end]; translated pieces live at
    pos(P_m) + vec(P_i P_j)."""

    kind: str  # FROM_P or FROM_P_TRANSLATED
    m_start: int
    m_end: int


@dataclass(frozen=True)
class PumpAttempt:
    step_no: int
    u: int
    v: int
    lo: int
    hi: int
    direction: str  # NORTHWARD / SOUTHWARD
    result: str  # "infinite" | "conflict" | "type_mismatch"
    conflict: Optional[ConflictAt] = None


@dataclass(frozen=True)
class AlgoState:
    mode: str
    u: int
    v: int
    pieces: tuple[StakePiece, ...]
    history: tuple[PumpAttempt, ...] = ()
    step_no: int = 0


@dataclass(frozen=True)
class Pumpable:
    certificate: certify.PumpableCertificate


@dataclass(frozen=True)
class Fragile:
    certificate: certify.FragileCertificate


@dataclass(frozen=True)
class CageFree:
    mode: str
    suffix_index: int


@dataclass(frozen=True)
class StakeReached:
    u: int
    v: int
    pieces: tuple[StakePiece, ...]


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    state: Optional[AlgoState] = None


Outcome = Pumpable | Fragile | CageFree | StakeReached | Inconclusive


@dataclass(frozen=True)
class Next:
    state: AlgoState
    events: tuple[dict, ...]


@dataclass(frozen=True)
class Halt:
    outcome: Outcome
    events: tuple[dict, ...]


@dataclass
class AlgoLimits:
    max_steps: int = 64
    stake_height_budget: Optional[int] = None  # default 8·|T| at run time
    initial_height_budget: Optional[int] = None  # default 2·|T|+2
    fragility_window_margin: int = 2
    fragility_max_assemblies: int = 100_000
    rs_entry_cap: int = 64
    check_invariants: bool = True


# ---------------------------------------------------------------------------
# mirroring


def mirror_point(p: Point) -> Point:
    return (-p[0], p[1])


def mirror_instance(tas: TileAssemblySystem, p: PathAssembly) -> tuple[TileAssemblySystem, PathAssembly]:
    """Reflect across the vertical axis: x ↦ −x, east/west glues swapped."""
    tiles = tuple(replace(t, east=t.west, west=t.east) for t in tas.tileset)
    seed = Assembly({mirror_point(q): n for q, n in tas.seed.tiles.items()},
                    {t.name: t for t in tiles}, check=False)
    mtas = TileAssemblySystem(tiles, seed)
    mpath = PathAssembly([(mirror_point(q), n) for q, n in p.steps])
    return mtas, mpath


# ---------------------------------------------------------------------------
# nice U-turns and initial pairs


def _west_visible_north_outputs(tas: TileAssemblySystem, p: PathAssembly) -> list:
    report = visibility_report(p, tas.seed)
    return [e for e in report.west_visible if e.kind == NORTH_OUTPUT]


def detect_nice_uturn(tas: TileAssemblySystem, p: PathAssembly) -> Optional[tuple[int, int, int]]:
    """Lexicographically least (i, j, k) forming a nice U-turn.

    (1) i < j of the same tile type with north output sides, north glues
    west-visible on P; (2) k > j whose south output glue is east-visible on
    seed ∪ P_[1,k]; (3) pos(P_k) + vec(P_j P_i) at or below the lowest tile
    of P_[i,k]. Tile-type equality is what the pigeonhole arguments supply
    and what the pumping operator needs.
    """
    norths = sorted(_west_visible_north_outputs(tas, p), key=lambda e: e.i)
    if len(norths) < 2:
        return None
    tile_map = tas.tile_map
    south_steps = [k for k in range(1, len(p)) if sub(p.pos(k + 1), p.pos(k)) == (0, -1)]
    east_vis_cache: dict[int, bool] = {}

    def k_visible(k: int) -> bool:
        if k not in east_vis_cache:
            east_vis_cache[k] = output_glue_visible_on_prefix(p, k, tas.seed, EAST_SIDE)
        return east_vis_cache[k]

    ys = [p.pos(m)[1] for m in range(1, len(p) + 1)]
    prefix_min_y = []
    cur = None
    for y in ys:
        cur = y if cur is None else min(cur, y)
        prefix_min_y.append(cur)

    for a in range(len(norths)):
        for b in range(a + 1, len(norths)):
            ei, ej = norths[a], norths[b]
            i, j = ei.i, ej.i
            if p.name(i) != p.name(j):
                continue
            vji = sub(p.pos(i), p.pos(j))
            for k in south_steps:
                if k <= j:
                    continue
                if not k_visible(k):
                    continue
                lowest = min(ys[i - 1 : k])
                if add(p.pos(k), vji)[1] <= lowest:
                    return (i, j, k)
    return None


@dataclass(frozen=True)
class Pair:
    i: int
    j: int


@dataclass(frozen=True)
class UTurnFound:
    i: int
    j: int
    k: int


@dataclass(frozen=True)
class TooShort:
    height: int
    budget: int


InitialPair = Pair | UTurnFound | TooShort


def find_initial_pair(tas: TileAssemblySystem, p: PathAssembly,
                      height_budget: Optional[int] = None) -> InitialPair:
    """Two same-type west-visible north-output tiles on the first prefix that
    grows past the height budget; nice-U-turn fallback when the full path
    hides them."""
    if height_budget is None:
        height_budget = 2 * len(tas.tileset) + 2
    k_hit = None
    for k in range(1, len(p) + 1):
        if rows_above(p.pos(k), tas.seed) > height_budget:
            k_hit = k
            break
    if k_hit is None:
        top = max((rows_above(p.pos(k), tas.seed) for k in range(1, len(p) + 1)), default=0)
        return TooShort(top, height_budget)

    prefix = p.prefix(k_hit)
    norths = sorted(_west_visible_north_outputs(tas, prefix), key=lambda e: e.i)
    tile_map = tas.tile_map
    best: Optional[tuple[int, int]] = None
    for a in range(len(norths)):
        for b in range(a + 1, len(norths)):
            i, j = norths[a].i, norths[b].i
            if p.name(i) == p.name(j):
                best = (i, j)
                break
        if best:
            break
    if best is None:
        uturn = detect_nice_uturn(tas, p)
        if uturn is not None:
            return UTurnFound(*uturn)
        return TooShort(rows_above(p.pos(k_hit), tas.seed), height_budget)

    i, j = best
    full = {e.i for e in _west_visible_north_outputs(tas, p)}
    if i in full and j in full:
        return Pair(i, j)
    uturn = detect_nice_uturn(tas, p)
    if uturn is not None:
        return UTurnFound(*uturn)
    return Pair(i, j)  # visibility broken but no U-turn found; best effort


# ---------------------------------------------------------------------------
# path-versus-path contact classification


def _shared_runs(q_positions: Sequence[Point], p: PathAssembly) -> list[list[tuple[int, int]]]:
    """Maximal runs [(qi, pi), ...] consecutive in both sequences (qi 0-based)."""
    runs: list[list[tuple[int, int]]] = []
    cur: list[tuple[int, int]] = []
    cur_dir = 0
    for qi, pos in enumerate(q_positions):
        pi = p.index_of(pos)
        if pi is None:
            if cur:
                runs.append(cur)
            cur, cur_dir = [], 0
            continue
        if cur and qi == cur[-1][0] + 1:
            d = pi - cur[-1][1]
            if d in (-1, 1) and (cur_dir == 0 or d == cur_dir):
                cur.append((qi, pi))
                cur_dir = d
                continue
        if cur:
            runs.append(cur)
        cur, cur_dir = [(qi, pi)], 0
    if cur:
        runs.append(cur)
    return runs


def _side_of(entry_dir: Optional[Vector], exit_dir: Optional[Vector], loose_dir: Vector) -> Optional[str]:
    """Side of a loose edge at a corridor vertex: entry_dir points into the
    vertex, exit_dir out of it. None when the corridor is open-ended."""
    if entry_dir is None or exit_dir is None:
        return None
    if ccw_strictly_between(exit_dir, neg(entry_dir), loose_dir):
        return "left"
    return "right"


def _run_p_sides(q_positions: Sequence[Point], p: PathAssembly,
                 run: list[tuple[int, int]]) -> dict:
    """Corridor analysis of one shared run: sides of P's loose edges.

    Returns {"entry": side-or-None, "exit": side-or-None, "p_exit": ...} where
    "exit" refers to P's forward (index-increasing) loose edge.
    """
    qi0, pi0 = run[0]
    qi1, pi1 = run[-1]
    n = len(q_positions)

    q_entry = sub(q_positions[qi0], q_positions[qi0 - 1]) if qi0 > 0 else None
    q_exit = sub(q_positions[qi1 + 1], q_positions[qi1]) if qi1 + 1 < n else None

    def corridor_at(end: str) -> tuple[Optional[Vector], Optional[Vector]]:
        if len(run) == 1:
            return q_entry, q_exit
        if end == "start":
            interior = sub(q_positions[qi0 + 1], q_positions[qi0])
            return q_entry, interior
        interior = sub(q_positions[qi1], q_positions[qi1 - 1])
        return interior, q_exit

    lo_n, hi_n = min(pi0, pi1), max(pi0, pi1)
    out = {}
    for which, pn, towards in (("backward", lo_n, lo_n - 1), ("forward", hi_n, hi_n + 1)):
        if towards < 1 or towards > len(p):
            out[which] = None
            continue
        vertex_end = "start" if pn == pi0 else "end"
        qv = q_positions[run[0][0]] if vertex_end == "start" else q_positions[run[-1][0]]
        loose = sub(p.pos(towards), qv)
        entry, exit_ = corridor_at(vertex_end)
        out[which] = _side_of(entry, exit_, loose)
    return out


def classify_contact(q_positions: Sequence[Point], p: PathAssembly | Sequence[Point]):
    """Disjoint / TouchesSameSide / Crosses(point) for a placed sequence
    against a path, comparing loose edges around each maximal shared run."""
    if not isinstance(p, PathAssembly):
        p = PathAssembly([(pos, "_") for pos in p])
    q_positions = [tuple(pos) for pos in q_positions]
    runs = _shared_runs(q_positions, p)
    if not runs:
        return DISJOINT
    for run in runs:
        sides = _run_p_sides(q_positions, p, run)
        a, b = sides["backward"], sides["forward"]
        if a is not None and b is not None and a != b:
            return Crosses(q_positions[run[0][0]])
    return TOUCHES_SAME_SIDE


# ---------------------------------------------------------------------------
# the algorithm


def _stake_tiles(p: PathAssembly, pieces: Sequence[StakePiece], vjj: Vector,
                 frame: Vector = (0, 0)) -> dict[Point, str]:
    tiles: dict[Point, str] = {}
    for piece in pieces:
        off = vjj if piece.kind == FROM_P_TRANSLATED else (0, 0)
        shift = (off[0] + frame[0], off[1] + frame[1])
        for m in range(piece.m_start, piece.m_end + 1):
            tiles[add(p.pos(m), shift)] = p.name(m)
    return tiles


def _stake_sequence(p: PathAssembly, pieces: Sequence[StakePiece], vjj: Vector,
                    frame: Vector = (0, 0)) -> list[tuple[Point, str]]:
    """Stake tiles in construction order (junction duplicates included)."""
    out: list[tuple[Point, str]] = []
    for piece in pieces:
        off = vjj if piece.kind == FROM_P_TRANSLATED else (0, 0)
        shift = (off[0] + frame[0], off[1] + frame[1])
        for m in range(piece.m_start, piece.m_end + 1):
            out.append((add(p.pos(m), shift), p.name(m)))
    return out


def initial_state(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int) -> AlgoState:
    n = len(p)
    if not (1 <= i < j <= n):
        raise PreconditionFailed(f"need 1 ≤ i < j ≤ |P|, got ({i}, {j})")
    if p.pos(i) == p.pos(j):
        raise PreconditionFailed("pair positions coincide")
    return AlgoState(FORWARD, i, j, (), (), 0)


def _frame_assembly(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                    state: AlgoState) -> dict[Point, str]:
    """Working assembly α for the state's mode; raises on internal conflicts."""
    vjj = sub(p.pos(j), p.pos(i))
    if state.mode == FORWARD:
        tiles = dict(tas.seed.tiles)
        tiles.update(p.induced_tiles(1, j))
        stake = _stake_tiles(p, state.pieces, vjj)
    else:
        tiles = dict(tas.seed.tiles)
        tiles.update(p.induced_tiles(1, i))
        stake = _stake_tiles(p, state.pieces, vjj, frame=neg(vjj))
    for q, name in stake.items():
        if tiles.get(q, name) != name:
            raise InvariantViolation(3, f"stake conflicts with base assembly at {q}")
        tiles[q] = name
    return tiles


def _dedup_order(tiles_in_order, occupied: Optional[set] = None):
    """Growth order with duplicate positions dropped (agreement asserted)."""
    seen: dict[Point, str] = {}
    order = []
    for pos, name in tiles_in_order:
        prev = seen.get(pos)
        if prev is not None:
            if prev != name:
                raise InvariantViolation(3, f"conflicting duplicate at {pos}")
            continue
        seen[pos] = name
        if occupied is not None and pos in occupied:
            continue
        order.append((pos, name))
    return order


def _witness_order_prefix(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                          state: AlgoState) -> list[tuple[Point, str]]:
    """Growth order realizing the state's working assembly α from the seed."""
    vjj = sub(p.pos(j), p.pos(i))
    if state.mode == FORWARD:
        base = list(p.steps[:j]) + _stake_sequence(p, state.pieces, vjj)
    else:
        base = list(p.steps[:i]) + _stake_sequence(p, state.pieces, vjj, frame=neg(vjj))
    return _dedup_order(base, occupied=set(tas.seed.tiles))


def _pump_direction(p: PathAssembly, lo: int, hi: int, vjj: Vector) -> str:
    return NORTHWARD if sub(p.pos(hi), p.pos(lo)) == vjj else SOUTHWARD


def _regrow_outcome(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                    state: AlgoState, lo: int, hi: int, info: Infinite,
                    alpha: dict[Point, str]) -> Outcome:
    """The pumping grows forever; decide pumpable vs fragile by whether P's
    remaining tiles still fit next to the materialized pumping."""
    q = pumping(p, lo, hi)
    last_k = hi + info.horizon * (hi - lo)
    start_k = lo if p.pos(state.v) == p.pos(lo) else hi  # stake anchor end
    blocking: Optional[tuple[int, Point, str]] = None
    placed: dict[Point, str] = {}
    for k in range(start_k + 1, last_k + 1):
        pos, name = q.tile(k)
        if pos in placed:
            continue
        placed[pos] = name
        idx = p.index_of(pos)
        if idx is not None and p.name(idx) != name:
            blocking = (k, pos, name)
            break
    if blocking is None:
        cert = certify.PumpableCertificate(lo, hi, info.horizon)
        return Pumpable(cert)
    k_star, point, _ = blocking
    order = _witness_order_prefix(tas, p, i, j, state)
    occupied = set(tas.seed.tiles) | {pos for pos, _ in order}
    tail = []
    for k in range(start_k + 1, k_star + 1):
        pos, name = q.tile(k)
        if pos in occupied:
            continue
        occupied.add(pos)
        tail.append((pos, name))
    cert = certify.FragileCertificate(tuple(order + tail), point)
    return Fragile(cert)


def _blocked_branch_probe(tas: TileAssemblySystem, p: PathAssembly, m: int,
                          blocker_name: str) -> Optional[certify.FragileCertificate]:
    """Branch tile (translate of P_m) blocked by a different tile type: try to
    re-attach the blocker one period back, directly on pos(P_m), on top of the
    bare path prefix. Sound whenever the attachment binds."""
    from .model import attachable

    target = p.pos(m)
    prefix_tiles = dict(tas.seed.tiles)
    prefix_tiles.update(p.induced_tiles(1, m - 1))
    asm = Assembly(prefix_tiles, tas.tile_map, check=False)
    blocker = tas.tile_map[blocker_name]
    if target in prefix_tiles or not attachable(asm, target, blocker):
        return None
    order = list(p.steps[: m - 1]) + [(target, blocker_name)]
    return certify.FragileCertificate(tuple(order), target)


def algo_step(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
              state: AlgoState) -> Next | Halt:
    """One forward or backward transition of the stake-path algorithm."""
    n = len(p)
    if not (1 <= i < j <= n):
        raise PreconditionFailed(f"invalid pair ({i}, {j})")
    vjj = sub(p.pos(j), p.pos(i))
    v_mode = vjj if state.mode == FORWARD else neg(vjj)
    u, v = state.u, state.v
    if add(p.pos(u), v_mode) != p.pos(v):
        raise PreconditionFailed(f"state pair ({u}, {v}) inconsistent with mode {state.mode}")
    events: list[dict] = []
    alpha = _frame_assembly(tas, p, i, j, state)
    history = state.history

    # forward mode first tries to pump the candidate segment
    if state.mode == FORWARD:
        lo, hi = min(u, v), max(u, v)
        direction = _pump_direction(p, lo, hi, vjj)
        if p.name(lo) != p.name(hi):
            attempt = PumpAttempt(state.step_no, u, v, lo, hi, direction, "type_mismatch")
            history = history + (attempt,)
            events.append({"type": "pump", "segment": [lo, hi], "direction": direction,
                           "result": "type_mismatch"})
        else:
            decision = decide_pumping(tas, p, lo, hi, extra_obstacles=alpha)
            if isinstance(decision, Infinite):
                attempt = PumpAttempt(state.step_no, u, v, lo, hi, direction, "infinite")
                history = history + (attempt,)
                events.append({"type": "pump", "segment": [lo, hi], "direction": direction,
                               "result": "infinite", "horizon": decision.horizon})
                outcome = _regrow_outcome(tas, p, i, j, replace(state, history=history),
                                          lo, hi, decision, alpha)
                events.append({"type": "halt", "outcome": type(outcome).__name__})
                return Halt(outcome, tuple(events))
            attempt = PumpAttempt(state.step_no, u, v, lo, hi, direction, "conflict", decision)
            history = history + (attempt,)
            events.append({"type": "pump", "segment": [lo, hi], "direction": direction,
                           "result": "conflict", "point": list(decision.point),
                           "iteration": decision.iteration, "against": decision.against})

    # branch growth: suffix of P from the anchor, translated by the mode vector
    occupied = dict(alpha)
    placements: list[tuple[int, Point, str]] = []
    run: list[tuple[int, int]] = []  # (branch index m, P index), agreements only
    run_dir = 0
    branch_positions: list[Point] = []
    stop: Optional[tuple[int, int]] = None  # (m1, n1) of the qualifying run

    def close_run() -> Optional[tuple[int, int]]:
        """Stop rule on the just-finished shared run: does P's forward exit
        edge leave strictly left of the branch corridor?"""
        nonlocal run, run_dir
        if not run:
            return None
        result = None
        m1, n1 = run[0]
        qi0 = m1 - u
        qi1 = run[-1][0] - u
        q_entry = sub(branch_positions[qi0], branch_positions[qi0 - 1]) if qi0 > 0 else None
        q_exit = (sub(branch_positions[qi1 + 1], branch_positions[qi1])
                  if qi1 + 1 < len(branch_positions) else None)
        hi_n = max(n1, run[-1][1])
        if hi_n < len(p) and q_entry is not None:
            exit_vertex_is_start = (hi_n == n1)
            if len(run) == 1:
                entry, exit_ = q_entry, q_exit
            elif exit_vertex_is_start:
                entry, exit_ = q_entry, sub(branch_positions[qi0 + 1], branch_positions[qi0])
            else:
                entry, exit_ = sub(branch_positions[qi1], branch_positions[qi1 - 1]), q_exit
            vertex = branch_positions[qi0 if exit_vertex_is_start else qi1]
            loose = sub(p.pos(hi_n + 1), vertex)
            side = _side_of(entry, exit_, loose)
            if side == "left":
                result = (m1, n1)
        run, run_dir = [], 0
        return result

    blocked: Optional[tuple[int, str]] = None
    breaks_path: Optional[tuple[Point, str]] = None
    for m in range(u, n + 1):
        pos = add(p.pos(m), v_mode)
        name = p.name(m)
        branch_positions.append(pos)
        pi = p.index_of(pos)
        agreeing_on_p = pi is not None and p.name(pi) == name
        extends = False
        if agreeing_on_p and m > u and run and m == run[-1][0] + 1:
            d = pi - run[-1][1]
            extends = d in (-1, 1) and (run_dir == 0 or d == run_dir)
        if run and not extends:
            # the current tile terminates the active run; a qualifying stop
            # there pre-empts whatever the current tile would have done
            stop = close_run()
            if stop is not None:
                break
        existing = occupied.get(pos)
        if existing is not None and existing != name:
            blocked = (m, existing)
            break
        if existing is None:
            if pi is not None and not agreeing_on_p:
                breaks_path = (pos, name)
                break
            occupied[pos] = name
            placements.append((m, pos, name))
        if agreeing_on_p and m > u:
            if extends:
                if run_dir == 0:
                    run_dir = pi - run[-1][1]
                run.append((m, pi))
            else:
                run, run_dir = [(m, pi)], 0
    if stop is None and blocked is None and breaks_path is None and run:
        stop = close_run()

    if breaks_path is not None:
        # the branch can place this tile first; P can then no longer grow here
        pos, name = breaks_path
        order = _witness_order_prefix(tas, p, i, j, state)
        occ = set(tas.seed.tiles) | {q for q, _ in order}
        tail = [(q, nm) for _, q, nm in placements if q not in occ]
        cert = certify.FragileCertificate(tuple(order + tail + [(pos, name)]), pos)
        events.append({"type": "branch", "grew": len(placements) + 1,
                       "stopped": "breaks_path", "at": list(pos)})
        events.append({"type": "halt", "outcome": "Fragile"})
        return Halt(Fragile(cert), tuple(events))

    if stop is not None:
        m1, n1 = stop
        kept = [t for t in placements if t[0] <= m1]
        piece_kind = FROM_P_TRANSLATED if state.mode == FORWARD else FROM_P
        piece = StakePiece(piece_kind, u, m1)
        new_mode = BACKWARD if state.mode == FORWARD else FORWARD
        new_state = AlgoState(new_mode, n1, m1, state.pieces + (piece,), history, state.step_no + 1)
        events.append({"type": "branch", "grew": len(kept), "stopped": "intersection",
                       "at": list(p.pos(n1)), "new_pair": [n1, m1], "zero_length": m1 == u})
        events.append({"type": "switch", "mode": new_mode, "u": n1, "v": m1})
        return Next(new_state, tuple(events))

    if blocked is not None:
        m_b, blocker = blocked
        events.append({"type": "branch", "grew": len(placements), "stopped": "blocked",
                       "at": list(add(p.pos(m_b), v_mode)), "blocker": blocker})
        cert = _blocked_branch_probe(tas, p, m_b, blocker)
        if cert is not None:
            events.append({"type": "halt", "outcome": "Fragile"})
            return Halt(Fragile(cert), tuple(events))
        events.append({"type": "halt", "outcome": "Inconclusive"})
        return Halt(Inconclusive("branch blocked by untranslatable obstacle",
                                 replace(state, history=history)), tuple(events))

    # branch exhausted without a qualifying intersection: cage-free stop
    events.append({"type": "branch", "grew": len(placements), "stopped": "exhausted"})
    events.append({"type": "halt", "outcome": "CageFree"})
    return Halt(CageFree(state.mode, u), tuple(events))


# ---------------------------------------------------------------------------
# stake-path invariants


def check_state_invariants(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                           state: AlgoState) -> None:
    """The three stake invariants (provenance, ray safety, no crossing),
    checked on the canonical stake."""
    vjj = sub(p.pos(j), p.pos(i))
    # claim 1: provenance — every piece is a P-segment or a translate of one
    for piece in state.pieces:
        if piece.kind not in (FROM_P, FROM_P_TRANSLATED):
            raise InvariantViolation(1, f"unknown provenance {piece.kind!r}")
        if not (1 <= piece.m_start <= piece.m_end <= len(p)):
            raise InvariantViolation(1, f"piece range {piece} out of bounds")
    if not state.pieces:
        return
    stake_seq = _stake_sequence(p, state.pieces, vjj)
    stake_path: list[Point] = []
    for pos, _ in stake_seq:
        if not stake_path or stake_path[-1] != pos:
            stake_path.append(pos)

    # claim 2: the stake never crosses the west visibility rays of P_i / P_j
    report = visibility_report(p, tas.seed)
    for idx in (i, j):
        edge = next((e for e in report.west_visible if e.i == idx), None)
        if edge is None:
            continue
        ray = report.rays[(WEST_SIDE, edge.level)]
        for a, b in zip(stake_path, stake_path[1:]):
            if step_crosses_ray(a, b, ray):
                raise InvariantViolation(2, f"stake crosses visibility ray of P_{idx}")

    # claim 3: neither the stake nor its south translate crosses P
    if len(set(stake_path)) == len(stake_path):
        if isinstance(classify_contact(stake_path, p), Crosses):
            raise InvariantViolation(3, "stake crosses P")
        translated = [add(q, neg(vjj)) for q in stake_path]
        if isinstance(classify_contact(translated, p), Crosses):
            raise InvariantViolation(3, "translated stake crosses P")


def max_stake_index(state: AlgoState) -> int:
    return max((piece.m_end for piece in state.pieces), default=0)


def max_stake_p_index(p: PathAssembly, state: AlgoState, vjj: Vector) -> int:
    """Largest P-index among the canonical stake's positions that lie on P."""
    best = 0
    for pos, _ in _stake_sequence(p, state.pieces, vjj):
        idx = p.index_of(pos)
        if idx is not None and idx > best:
            best = idx
    return best


# ---------------------------------------------------------------------------
# driving the algorithm


def run_algorithm(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                  limits: Optional[AlgoLimits] = None) -> tuple[Outcome, list[dict], AlgoState]:
    """Iterate algo_step until a halt, the stake height budget, or step budget.

    Returns (outcome, trace, final state); certificates inside decisive
    outcomes are always re-checked with the independent verifier first.
    """
    limits = limits or AlgoLimits()
    stake_budget = limits.stake_height_budget
    if stake_budget is None:
        stake_budget = 8 * len(tas.tileset)

    mirrored = _needs_mirror(tas, p, i, j)
    if mirrored:
        mtas, mp = mirror_instance(tas, p)
        outcome, trace, fstate = run_algorithm(mtas, mp, i, j, replace(limits))
        return _mirror_outcome_back(tas, p, outcome), trace + [{"type": "mirrored"}], fstate

    state = initial_state(tas, p, i, j)
    trace: list[dict] = []
    last_progress = 0
    while True:
        check_budget()
        if rows_above(p.pos(state.u), tas.seed) >= stake_budget:
            trace.append({"type": "halt", "outcome": "StakeReached",
                          "u": state.u, "v": state.v})
            return StakeReached(state.u, state.v, state.pieces), trace, state
        if state.step_no >= limits.max_steps:
            return Inconclusive("max_steps exhausted", state), trace, state
        result = algo_step(tas, p, i, j, state)
        trace.extend(result.events)
        if isinstance(result, Halt):
            outcome = result.outcome
            _check_certificate(tas, p, outcome)
            return outcome, trace, replace(state, history=_history_after(result, state))
        state = result.state
        if limits.check_invariants:
            check_state_invariants(tas, p, i, j, state)
        progress = max_stake_p_index(p, state, sub(p.pos(j), p.pos(i)))
        trace.append({"type": "progress", "max_p_index": progress})
        if progress <= last_progress:
            # the stake failed to advance along the path; stop honestly
            # rather than loop
            return Inconclusive("no stake progress", state), trace, state
        last_progress = progress


def _history_after(result: Halt, state: AlgoState) -> tuple[PumpAttempt, ...]:
    # halts carry no new state; reconstruct history from the event stream
    extra = []
    for ev in result.events:
        if ev.get("type") == "pump":
            lo, hi = ev["segment"]
            conflictinfo = None
            if ev["result"] == "conflict":
                conflictinfo = ConflictAt(tuple(ev["point"]), ev["iteration"], ev["against"])
            extra.append(PumpAttempt(state.step_no, state.u, state.v, lo, hi,
                                     ev["direction"], ev["result"], conflictinfo))
    return state.history + tuple(extra)


def _check_certificate(tas: TileAssemblySystem, p: PathAssembly, outcome: Outcome) -> None:
    if isinstance(outcome, Pumpable):
        if not certify.verify_pumpable(tas, p, outcome.certificate):
            raise InvariantViolation(0, "emitted pumpable certificate fails verification")
    if isinstance(outcome, Fragile):
        if not certify.verify_fragile(tas, p, outcome.certificate):
            raise InvariantViolation(0, "emitted fragile certificate fails verification")


def _pair_sides(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int) -> tuple[bool, bool]:
    """(west_visible, east_visible) for a proper north-output pair, else (False, False)."""
    if j >= len(p) or i >= len(p):
        return False, False
    if sub(p.pos(i + 1), p.pos(i)) != (0, 1) or sub(p.pos(j + 1), p.pos(j)) != (0, 1):
        return False, False
    report = visibility_report(p, tas.seed)
    west = {e.i for e in report.west_visible if e.kind == NORTH_OUTPUT}
    east = {e.i for e in report.east_visible if e.kind == NORTH_OUTPUT}
    return (i in west and j in west), (i in east and j in east)


def _needs_mirror(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int) -> bool:
    west, east = _pair_sides(tas, p, i, j)
    return east and not west


def _mirror_outcome_back(tas: TileAssemblySystem, p: PathAssembly, outcome: Outcome) -> Outcome:
    """Map an outcome computed on the mirrored instance back to the original."""
    if isinstance(outcome, Pumpable):
        c = outcome.certificate
        cert = certify.PumpableCertificate(c.i, c.j, c.verified_horizon)
        if not certify.verify_pumpable(tas, p, cert):
            raise InvariantViolation(0, "mirrored pumpable certificate fails on the original")
        return Pumpable(cert)
    if isinstance(outcome, Fragile):
        c = outcome.certificate
        order = tuple((mirror_point(q), name) for q, name in c.growth_order)
        cert = certify.FragileCertificate(order, mirror_point(c.conflict_point))
        if not certify.verify_fragile(tas, p, cert):
            raise InvariantViolation(0, "mirrored fragile certificate fails on the original")
        return Fragile(cert)
    return outcome


# ---------------------------------------------------------------------------
# the south-pump monitor


def _pump_positions(tas: TileAssemblySystem, p: PathAssembly, lo: int, hi: int) -> set[Point]:
    q = pumping(p, lo, hi)
    obstacles = dict(tas.seed.tiles)
    segment = [p.pos(k) for k in range(lo, hi + 1)]
    horizon, _ = decision_horizons(obstacles, segment, q.vector)
    return {q.tile(k)[0] for k in range(lo, hi + horizon * (hi - lo) + 1)}


def south_pump_monitor(tas: TileAssemblySystem, p: PathAssembly,
                       history: Sequence[PumpAttempt]) -> Optional[PumpAttempt]:
    """When two recorded south pump attempts on disjoint, ordered segments have
    intersecting pumpings, a north attempt must sit between them in the
    history. Returns the first confirming attempt, None when the hypothesis is
    unmet, and raises LemmaViolation on a counterexample."""
    souths = [a for a in history if a.direction == SOUTHWARD and a.result in ("infinite", "conflict")]
    for x in range(len(souths)):
        for y in range(x + 1, len(souths)):
            a, b = souths[x], souths[y]
            if a.hi >= b.lo:
                continue
            if not (_pump_positions(tas, p, a.lo, a.hi) & _pump_positions(tas, p, b.lo, b.hi)):
                continue
            between = [h for h in history
                       if a.step_no < h.step_no < b.step_no and h.direction == NORTHWARD]
            if between:
                return between[0]
            raise LemmaViolation(
                f"south attempts ({a.lo},{a.hi}) and ({b.lo},{b.hi}) intersect "
                f"with no north attempt between steps {a.step_no} and {b.step_no}")
    return None


# ---------------------------------------------------------------------------
# orchestration


@dataclass(frozen=True)
class FinalReport:
    outcome: Outcome | Inconclusive
    pair: Optional[InitialPair]
    trace: tuple[dict, ...]
    history: tuple[PumpAttempt, ...] = ()


def greedy_growth_order(tas: TileAssemblySystem,
                        target: dict[Point, str]) -> Optional[list[tuple[Point, str]]]:
    """Attachment order realizing `target` from the seed, or None."""
    from .model import attachable

    remaining = {q: nm for q, nm in target.items() if q not in tas.seed.tiles}
    for q, nm in target.items():
        if tas.seed.tiles.get(q, nm) != nm:
            return None
    cur = Assembly(dict(tas.seed.tiles), tas.tile_map, check=False)
    order: list[tuple[Point, str]] = []
    while remaining:
        placed = None
        for q in sorted(remaining):
            nm = remaining[q]
            if attachable(cur, q, tas.tile_map[nm]):
                placed = (q, nm)
                break
        if placed is None:
            return None
        q, nm = placed
        cur.tiles[q] = nm
        order.append(placed)
        del remaining[q]
    return order


def _try_translated_break(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                          state: AlgoState, attempt: PumpAttempt) -> Optional[certify.FragileCertificate]:
    """A failed post-stake pump conflicted with a path tile above the stake:
    shift the conflicting context one pump period along and let the pumping
    grow one iteration further, breaking P at the conflict point."""
    if attempt.conflict is None:
        return None
    point = attempt.conflict.point
    idx = p.index_of(point)
    if idx is None:
        return None
    vjj = sub(p.pos(j), p.pos(i))
    lo, hi = attempt.lo, attempt.hi
    shift = vjj if attempt.direction == NORTHWARD else neg(vjj)

    target: dict[Point, str] = dict(tas.seed.tiles)

    def put(q: Point, nm: str) -> bool:
        if target.get(q, nm) != nm:
            return False
        target[q] = nm
        return True

    base = p.induced_tiles(1, j if attempt.direction == NORTHWARD else i)
    frame = (0, 0) if attempt.direction == NORTHWARD else neg(vjj)
    stake = _stake_tiles(p, state.pieces, vjj, frame=frame)
    for q, nm in list(base.items()) + list(stake.items()):
        if not put(q, nm):
            return None
    # conflicting context between the stake anchor and the segment, translated
    for m in range(min(state.u, lo), max(idx, lo) + 1):
        if not put(add(p.pos(m), shift), p.name(m)):
            return None
    # the pumping, translated one period, grown up to the break point
    q_seq = pumping(p, lo, hi)
    limit = hi + (abs(attempt.conflict.iteration) + 2) * (hi - lo)
    broke = False
    for k in range(lo, limit + 1):
        pos, nm = q_seq.tile(k)
        pos = add(pos, shift)
        if not put(pos, nm):
            return None
        if pos == point:
            broke = True
            break
    if not broke or target.get(point) == p.name(idx):
        return None
    order = greedy_growth_order(tas, target)
    if order is None:
        return None
    cert = certify.FragileCertificate(tuple(order), point)
    return cert if certify.verify_fragile(tas, p, cert) else None


def _post_stake_continue(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                         state: AlgoState, limits: AlgoLimits,
                         trace: list[dict]) -> Outcome:
    """Keep stepping after the stake height budget, resolving new candidate
    segments with the conflict-translation strategies."""
    stake_state = state
    rs_entries = 0
    seen_attempts = len(state.history)
    while state.step_no < limits.max_steps:
        check_budget()
        result = algo_step(tas, p, i, j, state)
        trace.extend(result.events)
        if isinstance(result, Halt):
            _check_certificate(tas, p, result.outcome)
            return result.outcome
        state = result.state
        if limits.check_invariants:
            check_state_invariants(tas, p, i, j, state)
        for attempt in state.history[seen_attempts:]:
            if attempt.result != "conflict":
                continue
            if attempt.direction == SOUTHWARD:
                rs_entries += 1
                if rs_entries > limits.rs_entry_cap:
                    return Inconclusive("south pump attempts exceeded the stake-zone cap", state)
            cert = _try_translated_break(tas, p, i, j, stake_state, attempt)
            if cert is not None:
                trace.append({"type": "halt", "outcome": "Fragile", "via": "translated-break"})
                return Fragile(cert)
        seen_attempts = len(state.history)
    return Inconclusive("max_steps exhausted after stake", state)


def _resolve_cagefree(tas: TileAssemblySystem, p: PathAssembly, i: int, j: int,
                      outcome: CageFree, trace: list[dict]) -> Outcome:
    """Forward a cage-free stop to the window-movie machinery."""
    from . import movies

    vjj = sub(p.pos(j), p.pos(i))
    n = outcome.suffix_index
    for v in (vjj, neg(vjj)):
        if v[1] <= 0:
            continue
        try:
            seps = movies.cagefree_separators(p, n, v, tas.seed)
        except PreconditionFailed:
            continue
        recorded = []
        for w in seps:
            try:
                recorded.append((w, movies.record_movie(tas, p, w)))
            except Exception:
                continue
        for a in range(len(recorded)):
            for b in range(a + 1, len(recorded)):
                wa, ma = recorded[a]
                wb, mb = recorded[b]
                shift = sub(wb.offset, wa.offset)
                if shift == (0, 0) or not movies.movies_equal_upto(ma, mb, shift):
                    continue
                if set(wa.points()) & set(wb.points()):
                    continue
                res = movies.wml_pump(tas, p, wa, shift)
                if isinstance(res, movies.WmlPumpable):
                    trace.append({"type": "halt", "outcome": "Pumpable", "via": "cagefree-wml"})
                    return Pumpable(res.certificate)
                if isinstance(res, movies.WmlFragile):
                    trace.append({"type": "halt", "outcome": "Fragile", "via": "cagefree-wml"})
                    return Fragile(res.certificate)
    trace.append({"type": "note", "detail": "cage-free unresolved by window movies"})
    return outcome


def conclude(tas: TileAssemblySystem, p: PathAssembly,
             limits: Optional[AlgoLimits] = None) -> FinalReport:
    """Full pipeline: initial pair, the stake-path algorithm, the post-stake
    conflict-translation phase, the cage-free window-movie route, and the
    bounded fragility search for short paths."""
    limits = limits or AlgoLimits()
    trace: list[dict] = []
    pair = find_initial_pair(tas, p, limits.initial_height_budget)
    trace.append({"type": "initial_pair", "result": type(pair).__name__,
                  "detail": pair.__dict__.copy()})

    if isinstance(pair, TooShort):
        uturn = detect_nice_uturn(tas, p)
        handed = "west"
        if uturn is None:
            mtas, mp = mirror_instance(tas, p)
            mu = detect_nice_uturn(mtas, mp)
            if mu is not None:
                uturn, handed = mu, "east"
        if uturn is not None:
            trace.append({"type": "uturn", "triple": list(uturn), "handed": handed})
            run_tas, run_p = (tas, p) if handed == "west" else mirror_instance(tas, p)
            outcome, rtrace, state = run_algorithm(run_tas, run_p, uturn[0], uturn[1], limits)
            if handed == "east":
                outcome = _mirror_outcome_back(tas, p, outcome)
            trace.extend(rtrace)
            if isinstance(outcome, (Pumpable, Fragile)):
                return FinalReport(outcome, pair, tuple(trace), state.history)
        try:
            witness = fragility_witness(tas, p,
                                        window_margin=limits.fragility_window_margin,
                                        max_assemblies=limits.fragility_max_assemblies)
        except SearchBudgetExhausted:
            trace.append({"type": "note", "detail": "fragility search budget exhausted"})
            return FinalReport(Inconclusive("short path; fragility search budget exhausted"),
                               pair, tuple(trace))
        if witness is not None:
            order, point = witness
            cert = certify.FragileCertificate(tuple(order), point)
            if certify.verify_fragile(tas, p, cert):
                trace.append({"type": "halt", "outcome": "Fragile", "via": "fragility-witness"})
                return FinalReport(Fragile(cert), pair, tuple(trace))
        trace.append({"type": "halt", "outcome": "Inconclusive", "reason": "TooShort"})
        return FinalReport(Inconclusive(f"TooShort: height {pair.height} ≤ budget {pair.budget}"),
                           pair, tuple(trace))

    i, j = pair.i, pair.j
    outcome, rtrace, state = run_algorithm(tas, p, i, j, limits)
    trace.extend(rtrace)
    if isinstance(outcome, StakeReached):
        resumed = AlgoState(state.mode, state.u, state.v, state.pieces,
                            state.history, state.step_no)
        outcome = _post_stake_continue(tas, p, i, j, resumed, limits, trace)
    if isinstance(outcome, CageFree):
        outcome = _resolve_cagefree(tas, p, i, j, outcome, trace)
    return FinalReport(outcome, pair, tuple(trace), state.history)
