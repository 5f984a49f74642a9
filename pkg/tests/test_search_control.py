"""Tests for restarts, phase saving and learned nogood deletion."""
import math
import random
from functools import lru_cache

import pytest

from lazyasp.assignment import Assignment, NoGoodStore, TruthValue
from lazyasp.atoms import NoGood, neg, pos
from lazyasp.models import PhasePolicy, RestartStrategy
from lazyasp.search_control import (
    DeletionState,
    PhaseTable,
    RestartState,
    clean_store,
    reluctant_next,
)


@lru_cache(maxsize=None)
def luby(i):
    """Recursive definition of the Luby sequence, 1-indexed."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return luby(i - (1 << (k - 1)) + 1)


def _luby_stream(n):
    pair, out = (1, 1), []
    for _ in range(n):
        value, pair = reluctant_next(*pair)
        out.append(value)
    return out


def test_luby_prefix():
    """Test the first outputs of reluctant doubling."""
    stream = _luby_stream(16)
    assert stream[:8] == [1, 1, 2, 1, 1, 2, 4, 1]
    assert stream[14] == 8


def test_luby_matches_recursive_definition():
    """Test 4096 outputs against the recursive Luby definition."""
    assert _luby_stream(4096) == [luby(i) for i in range(1, 4097)]


def test_reluctant_pair_recurrence():
    """Test that (2, 2) advances to (3, 1)."""
    assert reluctant_next(2, 2) == (2, (3, 1))


def test_ema_single_update():
    """Test one EMA update from zero with alpha 2^-5."""
    state = RestartState()
    state.on_conflict_lbd(32)
    assert state.ema_fast == pytest.approx(1.0)
    assert state.total_conflicts == 1
    assert state.conflicts_since_restart == 1


def test_ema_converges_on_constant_stream():
    """Test that both averages approach a constant LBD."""
    state = RestartState(slow_alpha=2.0**-5)
    for _ in range(2000):
        state.on_conflict_lbd(7)
    assert state.ema_fast == pytest.approx(7.0)
    assert state.ema_slow == pytest.approx(7.0)
    assert math.isfinite(state.ema_fast)


def test_no_restart_during_warmup():
    """Test that adaptive restarts wait for the warmup."""
    state = RestartState(warmup=50, luby_unit=1)
    for _ in range(50):
        state.on_conflict_lbd(100)
    state.ema_slow = 1.0
    assert not state.should_restart()


def _primed(strategy=RestartStrategy.COMBINED, since=100):
    state = RestartState(warmup=50, luby_unit=32, strategy=strategy)
    state.total_conflicts = 200
    state.conflicts_since_restart = since
    return state


def test_no_restart_when_averages_equal():
    """Test that equal recent and long-run quality does not restart."""
    state = _primed()
    state.ema_fast = state.ema_slow = 4.0
    assert not state.should_restart()


def test_restart_when_recent_lbd_degrades():
    """Test that a doubled fast average past the Luby gate restarts."""
    state = _primed()
    state.ema_slow, state.ema_fast = 2.0, 4.0
    assert state.should_restart()


def test_luby_gate_blocks_early_restart():
    """Test that the combined strategy waits for luby_unit * luby conflicts."""
    state = _primed(since=31)
    state.ema_slow, state.ema_fast = 2.0, 4.0
    assert not state.should_restart()


def test_pure_strategies():
    """Test that the luby and adaptive strategies use only their own condition."""
    luby_only = _primed(RestartStrategy.LUBY, since=32)
    luby_only.ema_fast = luby_only.ema_slow = 1.0
    assert luby_only.should_restart()

    adaptive = _primed(RestartStrategy.ADAPTIVE, since=0)
    adaptive.ema_slow, adaptive.ema_fast = 1.0, 2.0
    assert adaptive.should_restart()


def test_on_restart_advances_luby():
    """Test that restarts walk the Luby sequence and reset the counter."""
    state = _primed()
    seen = [state.luby]
    for _ in range(6):
        state.on_restart()
        seen.append(state.luby)
    assert seen == [1, 1, 2, 1, 1, 2, 4]
    assert state.conflicts_since_restart == 0
    assert state.restarts == 6


@pytest.mark.parametrize("policy, expected", [(PhasePolicy.ALL_TRUE, True), (PhasePolicy.ALL_FALSE, False)])
def test_initial_phase_policies(policy, expected):
    """Test the phase of atoms that were never assigned."""
    table = PhaseTable(policy)
    table.grow(9)
    assert len(table) == 10
    assert all(table.phase(a) is expected for a in range(10))


def test_random_phase_is_seeded():
    """Test that equal seeds give equal random initial phases."""
    first, second = PhaseTable(PhasePolicy.RANDOM, seed=11), PhaseTable(PhasePolicy.RANDOM, seed=11)
    first.grow(63)
    second.grow(63)
    phases = [first.phase(a) for a in range(64)]
    assert phases == [second.phase(a) for a in range(64)]
    assert len(set(phases)) == 2


def test_phase_saved_on_unassignment():
    """Test that backjumping records the last value of each atom."""
    assignment = Assignment()
    phases = PhaseTable(PhasePolicy.ALL_TRUE)
    assignment.add_listener(phases)
    assignment.grow(2)
    phases.grow(2)
    assignment.decide(0, TruthValue.TRUE)
    assignment.assign(1, TruthValue.FALSE, NoGood([pos(0), pos(1)]))
    assignment.assign(2, TruthValue.MBT, NoGood([pos(0), neg(2)]))
    assignment.backjump(0)
    assert phases.phase(0) is True
    assert phases.phase(1) is False
    assert phases.phase(2) is True


def test_save_phase_rejects_unassigned():
    """Test that an unassigned value cannot be saved."""
    table = PhaseTable()
    table.grow(0)
    with pytest.raises(ValueError):
        table.save_phase(0, TruthValue.UNASSIGNED)


def test_deletion_schedule():
    """Test the first 25 cleanup intervals, resetting after 20 cycles."""
    state = DeletionState()
    intervals = []
    for _ in range(25):
        intervals.append(state.cycle_interval)
        state.on_cleanup()
    assert intervals[:3] == [2000, 2100, 2200]
    assert intervals[19] == 3900
    assert intervals[20:] == [2000, 2100, 2200, 2300, 2400]


def test_deletion_schedule_with_custom_interval():
    """Test that the base interval and step can be configured."""
    state = DeletionState(base_interval=2, interval_step=1)
    assert state.cycle_interval == 2
    state.on_conflict()
    assert not state.due
    state.on_conflict()
    assert state.due
    state.on_cleanup()
    assert state.cycle_interval == 3
    assert not state.due


def test_deletion_due_counts_conflicts_since_cleanup():
    """Test that cleanup becomes due after the interval's conflicts."""
    state = DeletionState()
    for _ in range(1999):
        state.on_conflict()
    assert not state.due
    state.on_conflict()
    assert state.due
    state.on_cleanup()
    assert not state.due and state.cycle_interval == 2100


def _store_with(activities, lbds=None):
    assignment = Assignment()
    store = NoGoodStore()
    n = len(activities)
    assignment.grow(2 * n)
    for i, activity in enumerate(activities):
        ng = NoGood([pos(2 * i), pos(2 * i + 1), pos(2 * n)], learned=True, lbd=lbds[i] if lbds else 3)
        ng.activity = activity
        store.add(ng, assignment)
    return store, assignment


def test_clean_store_stops_at_half():
    """Test that nine idle nogoods out of ten lose only five."""
    store, assignment = _store_with([0.0] * 9 + [100.0])
    deletion = DeletionState()
    assert clean_store(store, assignment, deletion) == 5
    assert len(store.learned) == 5
    assert deletion.cycles_done == 1


def test_clean_store_keeps_low_lbd():
    """Test that glue nogoods are never removed."""
    store, assignment = _store_with([0.0] * 6, lbds=[2] * 6)
    assert clean_store(store, assignment) == 0


def test_clean_store_keeps_locked():
    """Test that nogoods serving as reasons are kept."""
    assignment = Assignment()
    assignment.grow(20)
    store = NoGoodStore()
    for i, activity in enumerate([0.0, 0.0, 0.0, 100.0]):
        ng = NoGood([pos(20), pos(i)], learned=True, lbd=3)
        ng.activity = activity
        store.add(ng, assignment)
    assignment.decide(20, TruthValue.TRUE)
    assert store.propagate(assignment) is None
    assert clean_store(store, assignment) == 0


@pytest.mark.parametrize("seed", range(20))
def test_clean_store_invariants(seed):
    """Test post-cleanup invariants on random stores."""
    rng = random.Random(seed)
    n = rng.choice([10, 57, 300, 2000])
    activities = [rng.choice([0.0, rng.random() * 10, rng.random() * 1000]) for _ in range(n)]
    lbds = [rng.randint(1, 8) for _ in range(n)]
    store, assignment = _store_with(activities, lbds)
    eligible = [ng for ng in store.learned if ng.lbd > 2]
    average = sum(ng.activity for ng in eligible) / len(eligible) if eligible else 0.0
    before = list(store.learned)

    removed = clean_store(store, assignment)

    assert removed <= n // 2
    survivors = {id(ng) for ng in store.learned}
    assert len(survivors) == n - removed
    if removed < n // 2:
        for ng in before:
            if id(ng) in survivors:
                assert ng.lbd <= 2 or ng.activity >= 1.5 * average
