import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus
from tilepump.engine import mirror_instance
from tilepump.errors import InvalidVector, PreconditionFailed
from tilepump.model import Assembly, Glue, PathAssembly, TileAssemblySystem, TileType, validate_path
from tilepump.visibility import (
    NORTH_OUTPUT,
    OK,
    SOUTH_OUTPUT,
    Split,
    Violation,
    check_order,
    dominating_tiles,
    glue_edges,
    visibility_report,
    visible_glues,
    watershed,
)


class TestGlueEdges:
    def test_line_e_empty(self, line_e):
        tas, p = line_e
        assert glue_edges(p, tas.seed) == []

    def test_col_n_default_excludes_seed_junction(self, col_n):
        tas, p = col_n
        edges = glue_edges(p, tas.seed)
        assert [(e.i, e.level, e.x, e.kind) for e in edges] == [
            (1, 1, 0, NORTH_OUTPUT), (2, 2, 0, NORTH_OUTPUT),
            (3, 3, 0, NORTH_OUTPUT), (4, 4, 0, NORTH_OUTPUT)]

    def test_col_n_with_seed_junction(self, col_n):
        tas, p = col_n
        edges = glue_edges(p, tas.seed, include_seed_junction=True)
        assert len(edges) == 5
        assert [e.level for e in edges] == [0, 1, 2, 3, 4]
        assert all(e.kind == NORTH_OUTPUT and e.x == 0 for e in edges)

    def test_nshape_down_run(self, nshape):
        tas, p = nshape
        souths = [e for e in glue_edges(p, tas.seed) if e.kind == SOUTH_OUTPUT]
        assert souths and all(e.x == 4 for e in souths)


class TestVisibleGlues:
    def test_col_n_everything_visible_both_sides(self, col_n):
        tas, p = col_n
        rep = visibility_report(p, tas.seed)
        assert len(rep.east_visible) == 4
        assert len(rep.west_visible) == 4

    def test_nshape_sides(self, nshape):
        tas, p = nshape
        rep = visibility_report(p, tas.seed)
        west_cols = {e.x for e in rep.west_visible}
        assert {e.x for e in rep.west_visible if e.kind == NORTH_OUTPUT} == {0}
        east_souths = {e.x for e in rep.east_visible if e.kind == SOUTH_OUTPUT}
        assert east_souths == {4}

    def test_side_filter(self, col_n):
        tas, p = col_n
        east_only = visible_glues(p, tas.seed, "east")
        assert east_only.west_visible == [] and len(east_only.east_visible) == 4

    def test_adjacent_but_not_consecutive_edge_is_not_a_glue_edge(self):
        """Two interacting tiles, leftmost of their rows, not consecutive in P:
        the edge between them is not a glue of P, and another glue is visible
        on that boundary (the two-column zig-zag from the figure)."""
        a = Glue("a", 1)
        t = TileType("t", a, a, a, a)
        tiles = {"t": t}
        seed = Assembly({(0, 0): "t"}, tiles)
        tas = TileAssemblySystem((t,), seed)
        # climbs east column then returns above the start: (0,1) and (0,2)
        # are vertically adjacent and interacting but not consecutive in P
        steps = [((0, 1), "t"), ((1, 1), "t"), ((1, 2), "t"), ((0, 2), "t")]
        p = validate_path(tas, steps)
        edges = glue_edges(p, tas.seed)
        assert [(e.level, e.x) for e in edges] == [(1, 1)]
        rep = visibility_report(p, tas.seed)
        assert [(e.level, e.x) for e in rep.west_visible] == [(1, 1)]

    def test_seed_edge_obstructs(self):
        a = Glue("a", 1)
        t = TileType("t", a, a, a, a)
        s = TileType("s", Glue("x", 1), a, Glue("x", 1), a)
        tiles = (t, s)
        tm = {x.name: x for x in tiles}
        seed = Assembly({(3, 0): "s", (3, 1): "s"}, tm)
        tas = TileAssemblySystem(tiles, seed)
        # path's north glue at level 0 west of the seed's vertical edge at x=3
        p = validate_path(tas, [((2, 0), "t"), ((2, 1), "t")])
        rep = visibility_report(p, tas.seed)
        assert [(e.level, e.x) for e in rep.west_visible] == [(0, 2)]
        assert rep.east_visible == []  # blocked by the seed edge at x=3

    def test_at_most_one_per_level_and_side(self, nshape):
        tas, p = nshape
        rep = visibility_report(p, tas.seed)
        for lst in (rep.east_visible, rep.west_visible):
            levels = [e.level for e in lst]
            assert len(levels) == len(set(levels))


class TestWatershed:
    def test_col_n_split_zero(self, col_n):
        tas, p = col_n
        assert watershed(p, tas.seed) == Split(0)

    def test_nshape_last_not_highest(self, nshape):
        tas, p = nshape
        with pytest.raises(PreconditionFailed):
            watershed(p, tas.seed)

    def test_nshape_truncated_at_top_corner(self, nshape):
        tas, p = nshape
        top = p.prefix(9)  # ends at (4,5), a highest tile
        got = watershed(top, tas.seed)
        assert isinstance(got, Split)
        rep = visibility_report(top, tas.seed)
        assert all(e.kind == NORTH_OUTPUT for e in rep.east_visible)


class TestCheckOrder:
    def test_col_n(self, col_n):
        tas, p = col_n
        assert check_order(p, tas.seed) == OK

    def test_single_step_vacuous(self, col_n):
        tas, p = col_n
        assert check_order(p.prefix(2), tas.seed) == OK

    def test_nshape_truncated(self, nshape):
        tas, p = nshape
        assert check_order(p.prefix(9), tas.seed) == OK


class TestLemmaSelfTests:
    def test_random_paths_never_violate(self):
        rng = random.Random(20250810)
        checked = 0
        while checked < 400:
            tas = corpus.random_system(rng, max_tiles=3)
            steps = corpus.random_producible_path(tas, rng, max_len=20)
            if not steps:
                continue
            steps = corpus.truncate_at_highest(steps)
            if not steps:
                continue
            p = PathAssembly(steps)
            assert isinstance(watershed(p, tas.seed), Split)
            assert check_order(p, tas.seed) == OK
            checked += 1


class TestMirrorSymmetry:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000))
    def test_reports_swap(self, seed):
        rng = random.Random(seed)
        tas = corpus.random_system(rng, max_tiles=3)
        steps = corpus.random_producible_path(tas, rng, max_len=16)
        if not steps:
            return
        p = PathAssembly(steps)
        mtas, mp = mirror_instance(tas, p)
        rep = visibility_report(p, tas.seed)
        mrep = visibility_report(mp, mtas.seed)
        east = {(e.i, e.level, -e.x, e.kind) for e in rep.east_visible}
        west_m = {(e.i, e.level, e.x, e.kind) for e in mrep.west_visible}
        assert east == west_m
        west = {(e.i, e.level, -e.x, e.kind) for e in rep.west_visible}
        east_m = {(e.i, e.level, e.x, e.kind) for e in mrep.east_visible}
        assert west == east_m


class TestDominatingTiles:
    def test_col_n_only_last(self, col_n):
        _, p = col_n
        assert dominating_tiles(p, (0, 1)).dominating_indices == (5,)

    def test_line_e_all(self, line_e):
        _, p = line_e
        assert dominating_tiles(p, (0, 1)).dominating_indices == (1, 2, 3, 4, 5)

    def test_zero_vector(self, col_n):
        _, p = col_n
        with pytest.raises(InvalidVector):
            dominating_tiles(p, (0, 0))

    def brute_force(self, p, v):
        from tilepump.geometry import bounding_box, linf
        pts = [p.pos(i) for i in range(1, len(p) + 1)]
        (x0, y0), (x1, y1) = bounding_box(pts)
        diameter = (x1 - x0) + (y1 - y0)
        kmax = diameter // max(1, linf(v)) + 1
        out = []
        for i in range(1, len(p) + 1):
            hit = False
            for m in range(1, len(p) + 1):
                for k in range(1, kmax + 1):
                    q = (p.pos(i)[0] + k * v[0], p.pos(i)[1] + k * v[1])
                    if q == p.pos(m):
                        hit = True
            if not hit:
                out.append(i)
        return tuple(out)

    def test_nshape_matches_bruteforce(self, nshape):
        _, p = nshape
        for v in ((0, 3), (0, 1), (1, 1), (-1, 2)):
            assert dominating_tiles(p, v).dominating_indices == self.brute_force(p, v)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(-2, 2), st.integers(-2, 2))
    def test_random_matches_bruteforce(self, seed, vx, vy):
        if (vx, vy) == (0, 0):
            return
        rng = random.Random(seed)
        tas = corpus.random_system(rng)
        steps = corpus.random_producible_path(tas, rng, max_len=14)
        if not steps:
            return
        p = PathAssembly(steps)
        assert dominating_tiles(p, (vx, vy)).dominating_indices == self.brute_force(p, (vx, vy))
