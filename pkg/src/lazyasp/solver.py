"""
The solve loop.

Grounding and search alternate: every round grounds the rules that may fire
under the current assignment, propagates their nogoods, and then either
learns from a conflict, restarts, cleans the learned nogoods or guesses on a
choice point. Once no choice point is applicable, the atoms still unassigned
cannot be derived any more and count as FALSE. The result is an answer set
unless a must-be-true atom is left or some nogood needs one of those atoms.
"""

import time
from collections import deque
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Deque, FrozenSet, Iterator, List, Optional

from .assignment import Assignment, NoGoodStore, TruthValue, violated_when_closed
from .atoms import AtomTable, NoGood
from .conflict import analyze
from .errors import ResourceLimitReached, UnsatisfiableConflict
from .grounding import Grounder, rule_to_nogoods
from .heuristics import ChoiceHeuristic, make_heuristic
from .logging_config import get_logger
from .models import SolverConfig
from .run_context import bind_run_id
from .search_control import DeletionState, PhaseTable, RestartState, clean_store
from .support import SupportCheck
from .syntax import Atom, Program

__all__ = [
    "AnswerSet",
    "SolveStatus",
    "SolveStatistics",
    "SolveResult",
    "DecisionObserver",
    "Solver",
    "solve",
]

logger = get_logger(__name__)


@dataclass(frozen=True)
class AnswerSet:
    """Ordinary ground atoms assigned TRUE; body atoms are never included."""

    atoms: FrozenSet[Atom]

    def sorted_atoms(self) -> List[str]:
        return sorted(str(a) for a in self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        names = self.sorted_atoms()
        return "{ " + ", ".join(names) + " }" if names else "{ }"


class SolveStatus(str, Enum):
    EXHAUSTED = "exhausted"
    LIMIT_REACHED = "limit_reached"
    UNSAT = "unsat"
    RESOURCE_LIMIT = "resource_limit"


@dataclass
class SolveStatistics:
    conflicts: int = 0
    decisions: int = 0
    restarts: int = 0
    learned_nogoods: int = 0
    deleted_nogoods: int = 0
    ground_rules: int = 0
    atoms: int = 0
    answer_sets: int = 0
    wall_time: float = 0.0

    def lines(self) -> List[str]:
        """One ``key=value`` line per counter."""
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            out.append(f"{f.name}={value:.3f}" if isinstance(value, float) else f"{f.name}={value}")
        return out


@dataclass
class SolveResult:
    answer_sets: List[AnswerSet]
    status: SolveStatus
    statistics: SolveStatistics = field(default_factory=SolveStatistics)

    @property
    def satisfiable(self) -> bool:
        return bool(self.answer_sets)


class DecisionObserver:
    """Hook called right before every choice-point decision."""

    def on_decision(self, atom: int, sign: bool, assignment: Assignment) -> None:
        pass


class Solver:
    """
    One solve run over a program. Instances share nothing and are not
    reusable; create a new Solver per run.
    """

    def __init__(
        self,
        program: Program,
        config: Optional[SolverConfig] = None,
        observer: Optional[DecisionObserver] = None,
    ):
        self.program = program
        self.config = config or SolverConfig()
        self.observer = observer or DecisionObserver()
        cfg = self.config

        self.table = AtomTable()
        self.assignment = Assignment()
        self.store = NoGoodStore(short_size=cfg.moms_short_size)
        self.phases = PhaseTable(cfg.phase_policy, cfg.seed)
        self.table.add_growth_observer(self.assignment.grow)
        self.table.add_growth_observer(self.phases.grow)
        self.grounder = Grounder(program, self.table, cfg.grounding)
        self.heuristic: ChoiceHeuristic = make_heuristic(cfg, self.assignment, self.phases)
        for listener in (self.grounder, self.phases, self.heuristic):
            self.assignment.add_listener(listener)

        self.restart_state = RestartState(
            luby_unit=cfg.luby_unit,
            fast_alpha=cfg.ema_fast_alpha,
            slow_alpha=cfg.ema_slow_alpha,
            factor=cfg.restart_factor,
            warmup=cfg.restart_warmup,
            strategy=cfg.restart_strategy,
        )
        self.deletion = DeletionState(cfg.deletion_base_interval, cfg.deletion_interval_step)
        self.support = SupportCheck(program, self.table) if cfg.support_check else None
        self.statistics = SolveStatistics()
        self.status: Optional[SolveStatus] = None
        self._pending: Deque[NoGood] = deque()
        self._started = 0.0

    def answer_sets(self) -> Iterator[AnswerSet]:
        """
        Run the search, yielding answer sets as they are found.

        ``status`` is set once the generator is exhausted.
        """
        if self.status is not None:
            raise RuntimeError("solver instances cannot be reused")
        self._started = time.monotonic()
        try:
            while self.status is None:
                answer = self._step()
                if answer is not None:
                    yield answer
        except ResourceLimitReached as e:
            self.status = SolveStatus.RESOURCE_LIMIT
            logger.info("resource limit reached", reason=str(e))
        finally:
            stats = self.statistics
            stats.ground_rules = self.grounder.rules_emitted
            stats.atoms = len(self.table)
            stats.wall_time = time.monotonic() - self._started
            status = self.status.value if self.status else None
            logger.info("solve finished", status=status, **vars(stats))

    def _step(self) -> Optional[AnswerSet]:
        self._check_limits()
        conflict = self._ground_and_propagate()
        if conflict is not None:
            self._resolve(conflict)
            return None
        if self.support is not None:
            unsupported = self.support.find_unsupported(self.assignment)
            if unsupported is not None:
                self._resolve(unsupported)
                return None

        cfg = self.config
        if cfg.restarts and self.restart_state.should_restart():
            self.assignment.backjump(0)
            self.restart_state.on_restart()
            self.statistics.restarts += 1
            logger.info("restart", conflicts=self.statistics.conflicts, luby=self.restart_state.luby)
            return None
        if cfg.deletion and self.deletion.due:
            self.statistics.deleted_nogoods += clean_store(self.store, self.assignment, self.deletion)

        assignment = self.assignment
        choice = self.heuristic.pick_choice()
        if choice is not None:
            sign = self.heuristic.choose_sign(choice)
            self.observer.on_decision(choice, sign, assignment)
            assignment.decide(choice, self._decision_value(choice, sign))
            self.statistics.decisions += 1
            return None

        if assignment.has_mbt or violated_when_closed(self.store, assignment) is not None:
            # the choices made so far have no answer set
            self._resolve(NoGood(assignment.decision_literals()))
            return None

        return self._emit()

    def _decision_value(self, choice: int, sign: bool) -> TruthValue:
        if not sign:
            return TruthValue.FALSE
        body = self.heuristic.choice_points[choice].positive_body
        if all(self.assignment.value(b) is TruthValue.TRUE for b in body):
            return TruthValue.TRUE
        return TruthValue.MBT

    def _check_limits(self) -> None:
        cfg = self.config
        if cfg.max_conflicts is not None and self.statistics.conflicts >= cfg.max_conflicts:
            raise ResourceLimitReached(f"conflict limit {cfg.max_conflicts} reached")
        if cfg.timeout is not None and time.monotonic() - self._started >= cfg.timeout:
            raise ResourceLimitReached(f"timeout of {cfg.timeout}s reached")

    def _ground_and_propagate(self) -> Optional[NoGood]:
        """Alternate grounding and propagation until both reach a fixpoint."""
        while True:
            while self._pending:
                nogood = self._pending.popleft()
                conflict = self.store.add(nogood, self.assignment)
                self.heuristic.moms_update(nogood, self.store)
                if conflict is not None:
                    return conflict
            conflict = self.store.propagate(self.assignment)
            if conflict is not None:
                return conflict
            new_rules = self.grounder.ground_step(self.assignment)
            if not new_rules:
                return None
            for rule in new_rules:
                translation = rule_to_nogoods(rule)
                if translation.choice_point is not None:
                    self.heuristic.register_ground_rule(rule)
                self._pending.extend(translation.nogoods)

    def _finish_search(self) -> None:
        self.status = SolveStatus.EXHAUSTED if self.statistics.answer_sets else SolveStatus.UNSAT

    def _resolve(self, conflict: NoGood) -> None:
        assignment = self.assignment
        while conflict is not None:
            self.statistics.conflicts += 1
            level = max((assignment.level(a) for a in conflict.atoms()), default=0)
            if level == 0:
                self._finish_search()
                return
            assignment.backjump(level)
            try:
                result = analyze(conflict, assignment, self.store, self.heuristic.bump)
            except UnsatisfiableConflict:
                self._finish_search()
                return
            self.heuristic.on_conflict_decay()
            self.store.decay_activity()
            self.restart_state.on_conflict_lbd(result.lbd)
            self.deletion.on_conflict()
            assignment.backjump(result.backjump_level)
            self.statistics.learned_nogoods += 1
            conflict = self.store.add(result.learned, assignment)
            self.store.bump_activity(result.learned)

    def _emit(self) -> AnswerSet:
        assignment = self.assignment
        table = self.table
        answer = AnswerSet(
            frozenset(
                table.lookup(a) for a in table.ordinary_atoms() if assignment.value(a) is TruthValue.TRUE
            )
        )
        self.statistics.answer_sets += 1
        logger.info("answer set found", index=self.statistics.answer_sets, size=len(answer))

        limit = self.config.n_answers
        decisions = assignment.decision_literals()
        if limit is not None and self.statistics.answer_sets >= limit:
            self.status = SolveStatus.LIMIT_REACHED
        elif not decisions:
            self.status = SolveStatus.EXHAUSTED
        else:
            assignment.backjump(0)
            # permanent: deletion only touches learned nogoods
            conflict = self.store.add(NoGood(decisions), assignment)
            if conflict is not None:
                self._resolve(conflict)
        return answer


def solve(
    program: Program,
    config: Optional[SolverConfig] = None,
    observer: Optional[DecisionObserver] = None,
) -> SolveResult:
    """
    Compute up to ``config.n_answers`` answer sets of a program.

    Returns:
        The answer sets in the order found, the terminal status and run
        statistics
    """
    with bind_run_id():
        solver = Solver(program, config, observer)
        answers = list(solver.answer_sets())
    return SolveResult(answers, solver.status, solver.statistics)
