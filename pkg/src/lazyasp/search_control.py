"""
Search control: restart policy, phase saving and learned nogood deletion.
"""

import random
from typing import List, Optional, Tuple

from .assignment import Assignment, AssignmentListener, NoGoodStore, TruthValue, is_locked
from .logging_config import get_logger
from .models import PhasePolicy, RestartStrategy

__all__ = [
    "reluctant_next",
    "RestartState",
    "PhaseTable",
    "DeletionState",
    "clean_store",
]

logger = get_logger(__name__)


def reluctant_next(u: int, v: int) -> Tuple[int, Tuple[int, int]]:
    """
    One step of reluctant doubling.

    Returns:
        The current Luby value v and the next (u, v) pair
    """
    if u & -u == v:
        return v, (u + 1, 1)
    return v, (u, 2 * v)


class RestartState:
    """
    Luby sequence plus exponential moving averages of learned-nogood LBDs.

    With the combined strategy the Luby value is a gate: a restart happens only
    after ``luby_unit * luby`` conflicts since the last one, and only if recent
    LBDs are markedly worse than the long-run average.
    """

    def __init__(
        self,
        luby_unit: int = 32,
        fast_alpha: float = 2.0**-5,
        slow_alpha: float = 2.0**-14,
        factor: float = 1.25,
        warmup: int = 50,
        strategy: RestartStrategy = RestartStrategy.COMBINED,
    ):
        self.luby_unit = luby_unit
        self.fast_alpha = fast_alpha
        self.slow_alpha = slow_alpha
        self.factor = factor
        self.warmup = warmup
        self.strategy = strategy
        self.pair = (1, 1)
        self.ema_fast = 0.0
        self.ema_slow = 0.0
        self.total_conflicts = 0
        self.conflicts_since_restart = 0
        self.restarts = 0
        self.luby = self.reluctant_next()

    def reluctant_next(self) -> int:
        value, self.pair = reluctant_next(*self.pair)
        return value

    def on_conflict_lbd(self, lbd: int) -> None:
        self.ema_fast += self.fast_alpha * (lbd - self.ema_fast)
        self.ema_slow += self.slow_alpha * (lbd - self.ema_slow)
        self.total_conflicts += 1
        self.conflicts_since_restart += 1

    @property
    def gate_open(self) -> bool:
        return self.conflicts_since_restart >= self.luby_unit * self.luby

    @property
    def lbd_degraded(self) -> bool:
        return self.total_conflicts > self.warmup and self.ema_fast > self.factor * self.ema_slow

    def should_restart(self) -> bool:
        if self.strategy is RestartStrategy.LUBY:
            return self.gate_open
        if self.strategy is RestartStrategy.ADAPTIVE:
            return self.lbd_degraded
        return self.lbd_degraded and self.gate_open

    def on_restart(self) -> None:
        """Record a restart and advance the Luby sequence."""
        self.restarts += 1
        self.conflicts_since_restart = 0
        self.luby = self.reluctant_next()


class PhaseTable(AssignmentListener):
    """
    Last assigned polarity of every atom.

    Grows with the atom table; atoms never assigned so far carry the initial
    policy's value. Saving happens on every assignment and unassignment, so
    the phase is the last value regardless of whether it came from a choice
    or from propagation.
    """

    def __init__(self, policy: PhasePolicy = PhasePolicy.ALL_TRUE, seed: int = 0):
        self.policy = policy
        self._rng = random.Random(seed)
        self._phases: List[bool] = []

    def __len__(self) -> int:
        return len(self._phases)

    def grow(self, atom: int) -> None:
        while len(self._phases) <= atom:
            self._phases.append(self._initial())

    def _initial(self) -> bool:
        if self.policy is PhasePolicy.RANDOM:
            return self._rng.random() < 0.5
        return self.policy is PhasePolicy.ALL_TRUE

    def phase(self, atom: int) -> bool:
        return self._phases[atom]

    def save_phase(self, atom: int, value: TruthValue) -> None:
        if value is TruthValue.UNASSIGNED:
            raise ValueError("cannot save an unassigned phase")
        self._phases[atom] = value.is_positive

    def on_assign(self, atom: int, value: TruthValue, promotion: bool) -> None:
        self.save_phase(atom, value)

    def on_unassign(self, atom: int, value: TruthValue) -> None:
        self.save_phase(atom, value)


class DeletionState:
    """Conflicts between cleanups: 2000, 2100, ... resetting after 20 cycles."""

    BASE_INTERVAL = 2000
    INTERVAL_STEP = 100
    CYCLE_LENGTH = 20

    def __init__(self, base_interval: int = BASE_INTERVAL, interval_step: int = INTERVAL_STEP) -> None:
        self.base_interval = base_interval
        self.interval_step = interval_step
        self.cycles_done = 0
        self.conflicts_since_cleanup = 0

    @property
    def cycle_interval(self) -> int:
        return self.base_interval + self.interval_step * (self.cycles_done % self.CYCLE_LENGTH)

    def on_conflict(self) -> None:
        self.conflicts_since_cleanup += 1

    @property
    def due(self) -> bool:
        return self.conflicts_since_cleanup >= self.cycle_interval

    def on_cleanup(self) -> None:
        self.cycles_done += 1
        self.conflicts_since_cleanup = 0


def clean_store(
    store: NoGoodStore,
    assignment: Assignment,
    deletion: Optional[DeletionState] = None,
    threshold_factor: float = 1.5,
) -> int:
    """
    Delete inactive learned nogoods.

    Nogoods with lbd <= 2 are neither counted in the average nor removed, and
    locked nogoods are kept. The sweep goes from oldest to newest and stops
    once half of the learned nogoods have been removed.

    Returns:
        Number of nogoods removed
    """
    learned = store.learned
    eligible = [ng for ng in learned if ng.lbd is None or ng.lbd > 2]
    average = sum(ng.activity for ng in eligible) / len(eligible) if eligible else 0.0
    threshold = threshold_factor * average
    limit = len(learned) // 2

    doomed = []
    for nogood in eligible:
        if len(doomed) >= limit:
            break
        if nogood.activity < threshold and not is_locked(nogood, assignment):
            doomed.append(nogood)
    removed = store.remove(doomed)

    if deletion is not None:
        deletion.on_cleanup()
    logger.info("learned nogood cleanup", removed=removed, kept=len(store.learned), threshold=threshold)
    return removed
