import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus
from tilepump import certify, engine
from tilepump.engine import (
    AlgoLimits,
    CageFree,
    Crosses,
    DISJOINT,
    Fragile,
    Inconclusive,
    Pair,
    PumpAttempt,
    Pumpable,
    StakeReached,
    TOUCHES_SAME_SIDE,
    TooShort,
    UTurnFound,
    algo_step,
    check_state_invariants,
    classify_contact,
    conclude,
    detect_nice_uturn,
    find_initial_pair,
    initial_state,
    mirror_instance,
    run_algorithm,
    south_pump_monitor,
)
from tilepump.errors import LemmaViolation, PreconditionFailed
from tilepump.model import PathAssembly
from tilepump.visibility import NORTH_OUTPUT, visibility_report


class TestClassifyContact:
    def test_full_overlap_is_same_side(self, col_n):
        _, p = col_n
        q = [p.pos(k) for k in range(1, len(p) + 1)]
        assert classify_contact(q, p) == TOUCHES_SAME_SIDE

    def test_transversal_crossing(self):
        p = PathAssembly([((x, 0), "_") for x in range(-2, 3)])
        q = [(0, y) for y in range(-2, 3)]
        got = classify_contact(q, p)
        assert isinstance(got, Crosses)
        assert got.point == (0, 0)

    def test_touch_and_return_same_side(self):
        # Q dips onto P's row for one tile and returns north
        p = PathAssembly([((x, 0), "_") for x in range(-2, 3)])
        q = [(-1, 1), (0, 1), (0, 0), (1, 0), (1, 1), (2, 1)]
        assert classify_contact(q, p) == TOUCHES_SAME_SIDE

    def test_disjoint(self):
        p = PathAssembly([((x, 0), "_") for x in range(3)])
        assert classify_contact([(5, 5), (5, 6)], p) == DISJOINT

    def test_shared_run_crossing(self):
        # Q runs along P for two tiles then exits on the other side
        p = PathAssembly([((x, 0), "_") for x in range(-3, 4)])
        q = [(-1, 1), (0, 1), (0, 0), (1, 0), (1, -1)]
        got = classify_contact(q, p)
        assert isinstance(got, Crosses)


class TestDetectNiceUturn:
    def test_nshape(self, nshape):
        tas, p = nshape
        triple = detect_nice_uturn(tas, p)
        assert triple is not None
        i, j, k = triple
        assert i < j < k
        # i, j on the left column
        assert p.pos(i)[0] == 0 and p.pos(j)[0] == 0
        # condition 3 is honored
        vji = (p.pos(i)[0] - p.pos(j)[0], p.pos(i)[1] - p.pos(j)[1])
        lowest = min(p.pos(m)[1] for m in range(i, k + 1))
        assert p.pos(k)[1] + vji[1] <= lowest

    def test_line_e_absent(self, line_e):
        tas, p = line_e
        assert detect_nice_uturn(tas, p) is None

    def test_col_n_absent(self, col_n):
        tas, p = col_n
        assert detect_nice_uturn(tas, p) is None

    def test_hook_s_absent(self, hook_s):
        tas, p = hook_s
        assert detect_nice_uturn(tas, p) is None


class TestFindInitialPair:
    def test_col_n_pair(self, col_n):
        tas, p = col_n
        got = find_initial_pair(tas, p)
        assert isinstance(got, Pair)
        rep = visibility_report(p, tas.seed)
        west = {e.i for e in rep.west_visible if e.kind == NORTH_OUTPUT}
        assert got.i in west and got.j in west
        assert p.pos(got.i)[1] < p.pos(got.j)[1]
        assert p.name(got.i) == p.name(got.j)

    def test_line_e_too_short(self, line_e):
        tas, p = line_e
        got = find_initial_pair(tas, p)
        assert isinstance(got, TooShort)
        assert got.height == 0

    def test_nshape_pair(self, nshape):
        tas, p = nshape
        got = find_initial_pair(tas, p)
        assert isinstance(got, (Pair, UTurnFound))


class TestAlgoStep:
    def test_col_n_one_step_pumpable(self, col_n):
        tas, p = col_n
        state = initial_state(tas, p, 1, 2)
        result = algo_step(tas, p, 1, 2, state)
        assert isinstance(result, engine.Halt)
        assert isinstance(result.outcome, Pumpable)

    def test_fork_rejects_missing_pair(self, fork):
        tas, p = fork
        with pytest.raises(PreconditionFailed):
            initial_state(tas, p, 1, 2)

    def test_zigzag_first_step_switches(self, zigzag):
        tas, p = zigzag
        state = initial_state(tas, p, 1, 9)
        result = algo_step(tas, p, 1, 9, state)
        assert isinstance(result, engine.Next)
        assert result.state.mode == engine.BACKWARD
        assert (result.state.u, result.state.v) == (10, 2)
        assert result.state.pieces == (engine.StakePiece(engine.FROM_P_TRANSLATED, 1, 2),)


class TestRunAlgorithm:
    def test_col_n_pumpable(self, col_n):
        tas, p = col_n
        out, trace, _ = run_algorithm(tas, p, 1, 2)
        assert isinstance(out, Pumpable)
        assert certify.verify_pumpable(tas, p, out.certificate)

    def test_hook_s_descending_pair_fragile(self, hook_s):
        tas, p = hook_s
        out, trace, _ = run_algorithm(tas, p, 3, 4)
        assert isinstance(out, Fragile)
        assert certify.verify_fragile(tas, p, out.certificate)
        assert out.certificate.conflict_point == (1, 1)

    def test_nshape_pumps_left_column(self, nshape):
        tas, p = nshape
        pair = find_initial_pair(tas, p)
        out, trace, _ = run_algorithm(tas, p, pair.i, pair.j)
        assert isinstance(out, Pumpable)
        assert (out.certificate.i, out.certificate.j) == (pair.i, pair.j)

    def test_zigzag_cagefree_with_invariants(self, zigzag):
        tas, p = zigzag
        out, trace, state = run_algorithm(tas, p, 1, 9,
                                          AlgoLimits(stake_height_budget=10 ** 9))
        assert isinstance(out, CageFree)
        assert any(ev.get("type") == "switch" for ev in trace)

    def test_zigzag_stake_reached(self, zigzag):
        tas, p = zigzag
        out, trace, state = run_algorithm(tas, p, 1, 9, AlgoLimits(stake_height_budget=4))
        assert isinstance(out, StakeReached)
        assert out.u == 10
        assert out.pieces == (engine.StakePiece(engine.FROM_P_TRANSLATED, 1, 2),)
        check_state_invariants(tas, p, 1, 9,
                               engine.AlgoState(engine.BACKWARD, out.u, out.v, out.pieces))

    def test_progress_recorded(self, zigzag):
        tas, p = zigzag
        _, trace, _ = run_algorithm(tas, p, 1, 9, AlgoLimits(stake_height_budget=10 ** 9))
        progress = [ev["max_p_index"] for ev in trace if ev.get("type") == "progress"]
        assert progress == sorted(progress)
        assert all(a < b for a, b in zip(progress, progress[1:]))


class TestMirrorDispatch:
    def test_east_handed_pair_runs_mirrored(self, col_n):
        tas, p = col_n
        mtas, mp = mirror_instance(tas, p)
        out, trace, _ = run_algorithm(mtas, mp, 1, 2)
        assert isinstance(out, Pumpable)
        assert certify.verify_pumpable(mtas, mp, out.certificate)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000))
    def test_outcome_kinds_mirror(self, seed):
        rng = random.Random(seed)
        tas = corpus.random_system(rng, max_tiles=2, labels="ab")
        steps = corpus.random_producible_path(tas, rng, max_len=14)
        if not steps or len(steps) < 3:
            return
        p = PathAssembly(steps)
        rep = visibility_report(p, tas.seed)
        west = sorted(e.i for e in rep.west_visible if e.kind == NORTH_OUTPUT)
        pairs = [(a, b) for ai, a in enumerate(west) for b in west[ai + 1:]
                 if p.name(a) == p.name(b)]
        if not pairs:
            return
        i, j = pairs[0]
        out, _, _ = run_algorithm(tas, p, i, j, AlgoLimits(stake_height_budget=10 ** 9))
        mtas, mp = mirror_instance(tas, p)
        mout, _, _ = run_algorithm(mtas, mp, i, j, AlgoLimits(stake_height_budget=10 ** 9))
        assert type(out).__name__ == type(mout).__name__
        if isinstance(out, Fragile):
            assert mout.certificate.conflict_point == \
                engine.mirror_point(out.certificate.conflict_point)


class TestSouthPumpMonitor:
    def attempt(self, step, lo, hi, direction, result="conflict"):
        return PumpAttempt(step, lo, hi, lo, hi, direction, result)

    def test_single_attempt_vacuous(self, col_n):
        tas, p = col_n
        assert south_pump_monitor(tas, p, [self.attempt(0, 1, 2, "N")]) is None

    def test_non_intersecting_souths_vacuous(self, nshape):
        # two south segments on the NSHAPE's descent, pumped south along
        # disjoint columns after translating: construct on separated columns
        tas, p = nshape
        history = [self.attempt(0, 10, 11, "S"), self.attempt(1, 12, 13, "N")]
        assert south_pump_monitor(tas, p, history) is None

    def test_confirming_north_between(self, nshape):
        tas, p = nshape
        # segments [10,12] and [13,15] both descend x=4: their pumpings share
        # the column below, so the monitor demands a north attempt between
        a = self.attempt(0, 10, 12, "S")
        n = self.attempt(1, 11, 13, "N")
        b = self.attempt(2, 13, 15, "S")
        got = south_pump_monitor(tas, p, [a, n, b])
        assert got == n

    def test_violation_raised_without_north(self, nshape):
        tas, p = nshape
        a = self.attempt(0, 10, 12, "S")
        b = self.attempt(2, 13, 15, "S")
        with pytest.raises(LemmaViolation):
            south_pump_monitor(tas, p, [a, b])

    def test_all_real_traces_clean(self):
        rng = random.Random(7)
        for _ in range(300):
            tas = corpus.random_system(rng, max_tiles=2, labels="ab")
            steps = corpus.random_producible_path(tas, rng, max_len=16)
            if not steps or len(steps) < 3:
                continue
            p = PathAssembly(steps)
            rep = visibility_report(p, tas.seed)
            west = sorted(e.i for e in rep.west_visible if e.kind == NORTH_OUTPUT)
            pairs = [(a, b) for ai, a in enumerate(west) for b in west[ai + 1:]
                     if p.name(a) == p.name(b)]
            if not pairs:
                continue
            i, j = pairs[0]
            try:
                _, _, state = run_algorithm(tas, p, i, j,
                                            AlgoLimits(stake_height_budget=10 ** 9))
            except PreconditionFailed:
                continue
            south_pump_monitor(tas, p, state.history)  # must never raise


class TestConclude:
    def test_col_n_pumpable(self, col_n):
        tas, p = col_n
        report = conclude(tas, p)
        assert isinstance(report.outcome, Pumpable)
        assert certify.verify_pumpable(tas, p, report.outcome.certificate)

    def test_fork_fragile_via_fallback(self, fork):
        tas, p = fork
        report = conclude(tas, p)
        assert isinstance(report.outcome, Fragile)
        assert certify.verify_fragile(tas, p, report.outcome.certificate)
        assert any(ev.get("via") == "fragility-witness" for ev in report.trace)

    def test_line_e_inconclusive_too_short(self, line_e):
        tas, p = line_e
        report = conclude(tas, p)
        assert isinstance(report.outcome, Inconclusive)
        assert "TooShort" in report.outcome.reason
        assert isinstance(report.pair, TooShort)
        assert report.trace  # explanatory trace present

    def test_nshape_pumpable(self, nshape):
        tas, p = nshape
        report = conclude(tas, p)
        assert isinstance(report.outcome, Pumpable)

    def test_hook_s_fragile(self, hook_s):
        tas, p = hook_s
        report = conclude(tas, p)
        assert isinstance(report.outcome, Fragile)

    def test_zigzag_post_stake_continuation(self, zigzag):
        tas, p = zigzag
        report = conclude(tas, p, AlgoLimits(stake_height_budget=4))
        # resumes past the stake and still reaches a final outcome
        assert not isinstance(report.outcome, StakeReached)
