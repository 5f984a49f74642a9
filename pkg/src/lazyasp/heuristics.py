"""
Decision heuristics over choice points.

Only body atoms of rules with negation are choice points, and only those whose
rule's positive body already holds may be picked. The dependency-driven VSIDS
heuristic redirects activity bumps of ordinary atoms to the choice points that
can influence them.
"""

import heapq
from abc import ABC, abstractmethod
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .assignment import Assignment, AssignmentListener, NoGoodStore, TruthValue
from .atoms import NoGood
from .grounding import GroundRule
from .models import HeuristicKind, SolverConfig
from .search_control import PhaseTable

__all__ = [
    "DependencyMap",
    "ActivityHeap",
    "ChoiceHeuristic",
    "DependencyVSIDS",
    "NaiveHeuristic",
    "moms_score",
    "make_heuristic",
]


def moms_score(positive: int, negative: int, exponent: int = 10) -> int:
    return positive * negative * (1 << exponent) + positive + negative


class DependencyMap:
    """Ordinary atom -> choice points whose rule can make it true or false."""

    def __init__(self) -> None:
        self._influencers: Dict[int, Set[int]] = defaultdict(set)

    def register(self, choice_point: int, influenced: Iterable[int]) -> None:
        for atom in influenced:
            self._influencers[atom].add(choice_point)

    def influencers(self, atom: int) -> Set[int]:
        return self._influencers.get(atom, set())

    def __len__(self) -> int:
        return len(self._influencers)


class ActivityHeap:
    """
    Max-heap of atoms by activity with lazy deletion.

    Entries are (-activity, atom) so ties go to the lower atom id. An entry is
    stale once its atom left the heap or its activity changed; stale entries
    are dropped when they reach the top.
    """

    NORMALIZE_LIMIT = 1e100

    def __init__(self, decay: float = 0.92):
        self.decay_factor = decay
        self.increment = 1.0
        self.activity: Dict[int, float] = {}
        self._entries: List[Tuple[float, int]] = []
        self._members: Set[int] = set()

    def __contains__(self, atom: int) -> bool:
        return atom in self._members

    def __len__(self) -> int:
        return len(self._members)

    def push(self, atom: int) -> None:
        if atom in self._members:
            return
        self._members.add(atom)
        heapq.heappush(self._entries, (-self.activity.setdefault(atom, 0.0), atom))

    def discard(self, atom: int) -> None:
        self._members.discard(atom)

    def _settle(self) -> None:
        entries = self._entries
        while entries:
            key, atom = entries[0]
            if atom in self._members and -key == self.activity[atom]:
                return
            heapq.heappop(entries)

    def peek(self) -> Optional[int]:
        self._settle()
        return self._entries[0][1] if self._entries else None

    def pop(self) -> Optional[int]:
        self._settle()
        if not self._entries:
            return None
        _, atom = heapq.heappop(self._entries)
        self._members.discard(atom)
        return atom

    def set_activity(self, atom: int, value: float) -> None:
        self.activity[atom] = value
        if atom in self._members:
            heapq.heappush(self._entries, (-value, atom))
        if value > self.NORMALIZE_LIMIT:
            self.normalize()

    def bump(self, atom: int) -> None:
        self.set_activity(atom, self.activity.get(atom, 0.0) + self.increment)

    def decay(self) -> None:
        self.increment /= self.decay_factor

    def normalize(self) -> None:
        """Divide every activity and the increment by NORMALIZE_LIMIT."""
        for atom in self.activity:
            self.activity[atom] /= self.NORMALIZE_LIMIT
        self.increment /= self.NORMALIZE_LIMIT
        self._entries = [(-self.activity[a], a) for a in self._members]
        heapq.heapify(self._entries)

    def top_atoms(self) -> Set[int]:
        """All members with maximal activity (linear scan)."""
        if not self._members:
            return set()
        best = max(self.activity[a] for a in self._members)
        return {a for a in self._members if self.activity[a] == best}


class ChoiceHeuristic(AssignmentListener, ABC):
    """Common registry of choice points and sign selection."""

    def __init__(self, assignment: Assignment, phases: PhaseTable):
        self.assignment = assignment
        self.phases = phases
        self.choice_points: Dict[int, GroundRule] = {}

    def register_ground_rule(self, rule: GroundRule) -> None:
        if rule.body_atom is None:
            raise ValueError("ground rule has no choice point")
        self.choice_points[rule.body_atom] = rule

    def applicable(self, atom: int) -> bool:
        """
        The choice point is unassigned and its rule's positive body is TRUE or MBT.

        An MBT choice point is never guessed on: once its positive body is
        TRUE and its negative body FALSE, the body nogood promotes it to TRUE
        during propagation, and before that a guess could not derive it.
        """
        assignment = self.assignment
        if assignment.is_assigned(atom):
            return False
        return all(assignment.value(b).is_positive for b in self.choice_points[atom].positive_body)

    def choose_sign(self, atom: int) -> bool:
        """True for an MBT atom, otherwise the saved phase."""
        if self.assignment.value(atom) is TruthValue.MBT:
            return True
        return self.phases.phase(atom)

    def bump(self, atom: int) -> None:
        pass

    def on_conflict_decay(self) -> None:
        pass

    def moms_update(self, nogood: NoGood, store: NoGoodStore) -> None:
        pass

    @abstractmethod
    def pick_choice(self) -> Optional[int]:
        """
        Return an applicable choice point, or None if there is none.

        Assigned choice points, MBT ones included, are skipped and come back
        once a backjump unassigns them.
        """


class DependencyVSIDS(ChoiceHeuristic):
    """VSIDS over choice points with dependency-driven bumping and MOMs initialization."""

    def __init__(
        self,
        assignment: Assignment,
        phases: PhaseTable,
        decay: float = 0.92,
        moms_exponent: int = 10,
    ):
        super().__init__(assignment, phases)
        self.dependencies = DependencyMap()
        self.heap = ActivityHeap(decay)
        self.moms_exponent = moms_exponent

    def register_ground_rule(self, rule: GroundRule) -> None:
        super().register_ground_rule(rule)
        self.dependencies.register(rule.body_atom, (rule.head,) + rule.negative_body)
        self.heap.push(rule.body_atom)

    def bump(self, atom: int) -> None:
        if atom in self.choice_points:
            self.heap.bump(atom)
            return
        for choice_point in self.dependencies.influencers(atom):
            self.heap.bump(choice_point)

    def on_conflict_decay(self) -> None:
        self.heap.decay()

    def moms_update(self, nogood: NoGood, store: NoGoodStore) -> None:
        for atom in nogood.atoms():
            targets = (atom,) if atom in self.choice_points else self.dependencies.influencers(atom)
            for choice_point in targets:
                score = moms_score(*store.moms_counts(choice_point), self.moms_exponent)
                if score > self.heap.activity.get(choice_point, 0.0):
                    self.heap.set_activity(choice_point, float(score))

    def on_unassign(self, atom: int, value: TruthValue) -> None:
        if atom in self.choice_points:
            self.heap.push(atom)

    def pick_choice(self) -> Optional[int]:
        heap = self.heap
        set_aside = []
        picked = None
        while True:
            atom = heap.peek()
            if atom is None:
                break
            if self.assignment.is_assigned(atom):
                # back in the heap once unassigned
                heap.pop()
                continue
            if not self.applicable(atom):
                heap.pop()
                set_aside.append(atom)
                continue
            picked = atom
            break
        for atom in set_aside:
            heap.push(atom)
        return picked


class NaiveHeuristic(ChoiceHeuristic):
    """Lowest-id applicable choice point."""

    def __init__(self, assignment: Assignment, phases: PhaseTable):
        super().__init__(assignment, phases)
        self._order: List[int] = []

    def register_ground_rule(self, rule: GroundRule) -> None:
        super().register_ground_rule(rule)
        self._order.append(rule.body_atom)

    def pick_choice(self) -> Optional[int]:
        for atom in self._order:
            if self.applicable(atom):
                return atom
        return None


def make_heuristic(config: SolverConfig, assignment: Assignment, phases: PhaseTable) -> ChoiceHeuristic:
    if config.heuristic is HeuristicKind.NAIVE:
        return NaiveHeuristic(assignment, phases)
    return DependencyVSIDS(
        assignment,
        phases,
        decay=config.activity_decay,
        moms_exponent=config.moms_exponent,
    )
