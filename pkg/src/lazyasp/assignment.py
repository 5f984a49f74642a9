"""
Three-valued assignment trail and nogood propagation.

Atoms are TRUE, MBT (must-be-true), FALSE or unassigned. For nogood
violation TRUE and MBT are the same; the difference only records whether
the atom has been derived by a firing rule. An MBT atom is promoted to TRUE
by a head-derivation nogood once all its positive body atoms are TRUE and
its negative body atoms FALSE.
"""

from collections import defaultdict
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional

from .atoms import NoGood, neg, pos

__all__ = [
    "TruthValue",
    "TrailEntry",
    "AssignmentListener",
    "Assignment",
    "NoGoodStore",
    "imply",
    "propagate_naive",
    "unresolved_nogoods",
    "violated_when_closed",
    "is_locked",
]


class TruthValue(Enum):
    UNASSIGNED = 0
    FALSE = 1
    MBT = 2
    TRUE = 3

    @property
    def is_positive(self) -> bool:
        return self is TruthValue.TRUE or self is TruthValue.MBT


UNASSIGNED = TruthValue.UNASSIGNED
FALSE = TruthValue.FALSE
MBT = TruthValue.MBT
TRUE = TruthValue.TRUE


class TrailEntry(NamedTuple):
    atom: int
    value: TruthValue
    level: int
    reason: Optional[NoGood]
    promotion: bool = False


class AssignmentListener:
    """Receives assignment changes; both hooks default to no-ops."""

    def on_assign(self, atom: int, value: TruthValue, promotion: bool) -> None:
        pass

    def on_unassign(self, atom: int, value: TruthValue) -> None:
        pass


class Assignment:
    """
    Value, decision level and reason per atom, plus the trail.

    Every value change happens at the current decision level, so levels along
    the trail never decrease. An MBT→TRUE promotion adds a second trail entry;
    ``level``/``reason`` keep referring to the entry that made the atom
    positive, which is what conflict analysis resolves on.
    """

    def __init__(self) -> None:
        self._values: List[TruthValue] = []
        self._levels: List[int] = []
        self._reasons: List[Optional[NoGood]] = []
        self._promotion_reasons: List[Optional[NoGood]] = []
        self.trail: List[TrailEntry] = []
        self._level_starts: List[int] = []
        self._listeners: List[AssignmentListener] = []
        self._mbt_count = 0
        # Index of the next trail entry to propagate; owned by NoGoodStore
        self.propagated = 0

    def add_listener(self, listener: AssignmentListener) -> None:
        self._listeners.append(listener)

    def grow(self, atom: int) -> None:
        """Make room for atom ids up to and including ``atom``."""
        missing = atom + 1 - len(self._values)
        if missing > 0:
            self._values.extend([UNASSIGNED] * missing)
            self._levels.extend([-1] * missing)
            self._reasons.extend([None] * missing)
            self._promotion_reasons.extend([None] * missing)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def decision_level(self) -> int:
        return len(self._level_starts)

    def value(self, atom: int) -> TruthValue:
        return self._values[atom]

    def level(self, atom: int) -> int:
        return self._levels[atom]

    def reason(self, atom: int) -> Optional[NoGood]:
        return self._reasons[atom]

    def promotion_reason(self, atom: int) -> Optional[NoGood]:
        return self._promotion_reasons[atom]

    def holds(self, literal: int) -> bool:
        value = self._values[literal >> 1]
        if literal & 1:
            return value is TRUE or value is MBT
        return value is FALSE

    def falsified(self, literal: int) -> bool:
        value = self._values[literal >> 1]
        if literal & 1:
            return value is FALSE
        return value is TRUE or value is MBT

    def is_assigned(self, atom: int) -> bool:
        return self._values[atom] is not UNASSIGNED

    @property
    def has_mbt(self) -> bool:
        return self._mbt_count > 0

    def mbt_atoms(self) -> List[int]:
        return [a for a, v in enumerate(self._values) if v is MBT]

    def assign(self, atom: int, value: TruthValue, reason: Optional[NoGood] = None) -> Optional[NoGood]:
        """
        Assign ``value`` at the current decision level.

        Returns:
            None on success (including no-op re-assignments), or the
            responsible nogood when the value contradicts the current one
        """
        if value is UNASSIGNED:
            raise ValueError("cannot assign UNASSIGNED")
        current = self._values[atom]
        if current is UNASSIGNED:
            level = len(self._level_starts)
            self._values[atom] = value
            self._levels[atom] = level
            self._reasons[atom] = reason
            if value is MBT:
                self._mbt_count += 1
            self.trail.append(TrailEntry(atom, value, level, reason))
            for listener in self._listeners:
                listener.on_assign(atom, value, False)
            return None
        if current is value or (current is TRUE and value is MBT):
            return None
        if current is MBT and value is TRUE:
            self._values[atom] = TRUE
            self._promotion_reasons[atom] = reason
            self._mbt_count -= 1
            self.trail.append(TrailEntry(atom, TRUE, len(self._level_starts), reason, True))
            for listener in self._listeners:
                listener.on_assign(atom, TRUE, True)
            return None
        if reason is None:
            raise ValueError(f"decision on atom {atom} contradicts its value {current.name}")
        return reason

    def decide(self, atom: int, value: TruthValue) -> None:
        """Open a new decision level and assign ``value`` to an unassigned atom."""
        if self._values[atom] is not UNASSIGNED:
            raise ValueError(f"cannot decide on assigned atom {atom}")
        self._level_starts.append(len(self.trail))
        self.assign(atom, value)

    def backjump(self, level: int) -> None:
        """Undo every assignment made above ``level``."""
        if level >= len(self._level_starts):
            return
        start = self._level_starts[level]
        for entry in reversed(self.trail[start:]):
            atom = entry.atom
            if entry.promotion:
                self._values[atom] = MBT
                self._promotion_reasons[atom] = None
                self._mbt_count += 1
                continue
            old = self._values[atom]
            self._values[atom] = UNASSIGNED
            self._levels[atom] = -1
            self._reasons[atom] = None
            if old is MBT:
                self._mbt_count -= 1
            for listener in self._listeners:
                listener.on_unassign(atom, old)
        del self.trail[start:]
        del self._level_starts[level:]
        self.propagated = min(self.propagated, len(self.trail))

    def decision_literals(self) -> List[int]:
        """The literal of each decision, by increasing level."""
        literals = []
        for start in self._level_starts:
            entry = self.trail[start]
            literals.append(neg(entry.atom) if entry.value is FALSE else pos(entry.atom))
        return literals

    def literal_level(self, literal: int) -> int:
        return self._levels[literal >> 1]


def imply(nogood: NoGood, literal: int, assignment: Assignment) -> Optional[NoGood]:
    """
    Assign the atom of ``literal`` so that the literal no longer holds.

    A positive-sign literal makes its atom FALSE. A negative-sign literal
    makes its atom TRUE if it is the nogood's head literal and all other
    positive-sign literals are TRUE, and MBT otherwise.
    """
    atom = literal >> 1
    if literal & 1:
        return assignment.assign(atom, FALSE, nogood)
    value = TRUE if nogood.head_literal == literal and _body_true(nogood, assignment) else MBT
    return assignment.assign(atom, value, nogood)


def _body_true(nogood: NoGood, assignment: Assignment) -> bool:
    """All literals except the head hold, positive-sign ones with TRUE strength."""
    for index, literal in enumerate(nogood.literals):
        if index == nogood.head:
            continue
        value = assignment.value(literal >> 1)
        if literal & 1:
            if value is not TRUE:
                return False
        elif value is not FALSE:
            return False
    return True


def _promote(nogood: NoGood, assignment: Assignment) -> None:
    head = nogood.head_atom
    if assignment.value(head) is MBT and _body_true(nogood, assignment):
        assignment.assign(head, TRUE, nogood)


class NoGoodStore:
    """
    All nogoods known to the solver, with two watched literals per nogood.

    Watch lists are indexed by the literal whose *holding* wakes the nogood
    up. Occurrence counts over short nogoods feed the MOMs initialization.
    """

    ACTIVITY_LIMIT = 1e20

    def __init__(self, short_size: int = 3, activity_decay: float = 0.999):
        self.nogoods: List[NoGood] = []
        self.learned: List[NoGood] = []
        self.short_size = short_size
        self.positive_occurrences: Dict[int, int] = defaultdict(int)
        self.negative_occurrences: Dict[int, int] = defaultdict(int)
        self.activity_increment = 1.0
        self.activity_decay = activity_decay
        self._watches: Dict[int, List[NoGood]] = defaultdict(list)
        self._strength: Dict[int, List[NoGood]] = defaultdict(list)

    def __len__(self) -> int:
        return len(self.nogoods) + len(self.learned)

    def __iter__(self):
        yield from self.nogoods
        yield from self.learned

    def add(self, nogood: NoGood, assignment: Assignment) -> Optional[NoGood]:
        """
        Add a nogood and establish its watches under the current assignment.

        If the nogood is unit (or satisfied only by a literal assigned later
        than the rest), the assignment first backjumps to the level where the
        nogood became unit so the implied literal sits at its proper level.
        Nogoods of size one thus always take effect at level 0.

        Returns:
            The nogood itself if it is violated, None otherwise
        """
        (self.learned if nogood.learned else self.nogoods).append(nogood)
        if len(nogood) <= self.short_size:
            for literal in nogood.literals:
                counts = self.positive_occurrences if literal & 1 else self.negative_occurrences
                counts[literal >> 1] += 1
        if nogood.head is not None:
            for atom in nogood.atoms():
                self._strength[atom].append(nogood)
        conflict = self._attach(nogood, assignment)
        if conflict is None and nogood.head is not None:
            _promote(nogood, assignment)
        return conflict

    def _watch(self, nogood: NoGood, literals: List[int]) -> None:
        nogood.watches = literals if len(nogood) > 1 else []
        for literal in nogood.watches:
            self._watches[literal].append(nogood)

    def _attach(self, nogood: NoGood, assignment: Assignment) -> Optional[NoGood]:
        holding: List[int] = []
        unassigned: List[int] = []
        falsified: List[int] = []
        for literal in nogood.literals:
            if assignment.holds(literal):
                holding.append(literal)
            elif assignment.falsified(literal):
                falsified.append(literal)
            else:
                unassigned.append(literal)
        by_level = lambda lit: assignment.literal_level(lit)  # noqa: E731
        holding.sort(key=by_level, reverse=True)
        falsified.sort(key=by_level, reverse=True)
        top = assignment.literal_level(holding[0]) if holding else 0

        if len(unassigned) >= 2:
            self._watch(nogood, unassigned[:2])
            return None
        if len(unassigned) == 1:
            if falsified:
                self._watch(nogood, [unassigned[0], falsified[0]])
                return None
            if top < assignment.decision_level:
                assignment.backjump(top)
            self._watch(nogood, [unassigned[0]] + holding[:1])
            return imply(nogood, unassigned[0], assignment)
        if falsified:
            if len(falsified) == 1 and assignment.literal_level(falsified[0]) > top:
                assignment.backjump(top)
                self._watch(nogood, [falsified[0]] + holding[:1])
                return imply(nogood, falsified[0], assignment)
            self._watch(nogood, (falsified[:2] + holding)[:2])
            return None
        if not nogood.literals:
            return nogood
        self._watch(nogood, holding[:2])
        return nogood

    def propagate(self, assignment: Assignment) -> Optional[NoGood]:
        """
        Propagate every trail entry not yet propagated to a fixpoint.

        Returns:
            A violated nogood, or None at a conflict-free fixpoint
        """
        trail = assignment.trail
        while assignment.propagated < len(trail):
            entry = trail[assignment.propagated]
            assignment.propagated += 1
            if not entry.promotion:
                literal = neg(entry.atom) if entry.value is FALSE else pos(entry.atom)
                conflict = self._visit(literal, assignment)
                if conflict is not None:
                    return conflict
            for nogood in self._strength.get(entry.atom, ()):
                _promote(nogood, assignment)
        return None

    def _visit(self, literal: int, assignment: Assignment) -> Optional[NoGood]:
        watchers = self._watches.get(literal)
        if not watchers:
            return None
        kept: List[NoGood] = []
        self._watches[literal] = kept
        for index, nogood in enumerate(watchers):
            first, second = nogood.watches
            other = second if first == literal else first
            if assignment.falsified(other):
                kept.append(nogood)
                continue
            replacement = None
            for candidate in nogood.literals:
                if candidate != literal and candidate != other and not assignment.holds(candidate):
                    replacement = candidate
                    break
            if replacement is not None:
                nogood.watches = [other, replacement]
                self._watches[replacement].append(nogood)
                continue
            kept.append(nogood)
            conflict = nogood if assignment.holds(other) else imply(nogood, other, assignment)
            if conflict is not None:
                kept.extend(watchers[index + 1:])
                return conflict
        return None

    def remove(self, nogoods: Iterable[NoGood]) -> int:
        """Remove learned nogoods; returns how many were removed."""
        doomed = {id(ng): ng for ng in nogoods}
        if not doomed:
            return 0
        self.learned = [ng for ng in self.learned if id(ng) not in doomed]
        touched = set()
        for nogood in doomed.values():
            touched.update(nogood.watches)
            if len(nogood) <= self.short_size:
                for literal in nogood.literals:
                    counts = self.positive_occurrences if literal & 1 else self.negative_occurrences
                    counts[literal >> 1] -= 1
        for literal in touched:
            self._watches[literal] = [ng for ng in self._watches[literal] if id(ng) not in doomed]
        return len(doomed)

    def bump_activity(self, nogood: NoGood) -> None:
        nogood.activity += self.activity_increment
        if nogood.activity > self.ACTIVITY_LIMIT:
            for learned in self.learned:
                learned.activity /= self.ACTIVITY_LIMIT
            self.activity_increment /= self.ACTIVITY_LIMIT

    def decay_activity(self) -> None:
        self.activity_increment /= self.activity_decay

    def moms_counts(self, atom: int) -> "tuple[int, int]":
        return self.positive_occurrences.get(atom, 0), self.negative_occurrences.get(atom, 0)


def propagate_naive(nogoods: Iterable[NoGood], assignment: Assignment) -> Optional[NoGood]:
    """
    Full-scan propagation to a fixpoint, used to cross-check the watched
    literal scheme. Same semantics as NoGoodStore.propagate.
    """
    nogoods = list(nogoods)
    changed = True
    while changed:
        changed = False
        for nogood in nogoods:
            open_literals = [lit for lit in nogood.literals if not assignment.holds(lit)]
            if not open_literals:
                return nogood
            if len(open_literals) == 1 and not assignment.falsified(open_literals[0]):
                conflict = imply(nogood, open_literals[0], assignment)
                if conflict is not None:
                    return conflict
                changed = True
            if nogood.head is not None and assignment.value(nogood.head_atom) is MBT:
                if _body_true(nogood, assignment):
                    assignment.assign(nogood.head_atom, TRUE, nogood)
                    changed = True
    assignment.propagated = len(assignment.trail)
    return None


def unresolved_nogoods(nogoods: Iterable[NoGood], assignment: Assignment) -> List[NoGood]:
    """
    Nogoods that propagation should have acted on: violated, unit with an
    unassigned remaining literal, or able to promote their MBT head.
    """
    found = []
    for nogood in nogoods:
        open_literals = [lit for lit in nogood.literals if not assignment.holds(lit)]
        if not open_literals or (
            len(open_literals) == 1 and not assignment.falsified(open_literals[0])
        ):
            found.append(nogood)
        elif nogood.head is not None and assignment.value(nogood.head_atom) is MBT:
            if _body_true(nogood, assignment):
                found.append(nogood)
    return found


def violated_when_closed(nogoods: Iterable[NoGood], assignment: Assignment) -> Optional[NoGood]:
    """A nogood that would be violated once every unassigned atom is taken as FALSE."""
    for nogood in nogoods:
        if all(
            assignment.holds(lit) or (not lit & 1 and not assignment.is_assigned(lit >> 1))
            for lit in nogood.literals
        ):
            return nogood
    return None


def is_locked(nogood: NoGood, assignment: Assignment) -> bool:
    """True iff the nogood is the reason of some current trail entry."""
    for atom in nogood.atoms():
        if assignment.reason(atom) is nogood or assignment.promotion_reason(atom) is nogood:
            return True
    return False
