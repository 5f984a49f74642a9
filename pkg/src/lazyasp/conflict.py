"""
First-UIP conflict analysis over the assignment trail.
"""

from typing import Callable, List, NamedTuple, Optional, Set

from .assignment import Assignment, NoGoodStore, TruthValue
from .atoms import NoGood, neg, pos
from .errors import UnsatisfiableConflict

__all__ = ["ConflictResult", "analyze", "compute_lbd"]


class ConflictResult(NamedTuple):
    learned: NoGood
    backjump_level: int
    lbd: int


def compute_lbd(nogood: NoGood, assignment: Assignment) -> int:
    """
    Number of distinct decision levels among the nogood's atoms.

    Raises:
        ValueError: If an atom of the nogood is unassigned
    """
    levels = set()
    for atom in nogood.atoms():
        if not assignment.is_assigned(atom):
            raise ValueError(f"atom {atom} of {nogood!r} is unassigned")
        levels.add(assignment.level(atom))
    return len(levels)


def _holding_literal(atom: int, assignment: Assignment) -> int:
    return neg(atom) if assignment.value(atom) is TruthValue.FALSE else pos(atom)


def analyze(
    conflicting: NoGood,
    assignment: Assignment,
    store: Optional[NoGoodStore] = None,
    bump: Optional[Callable[[int], None]] = None,
) -> ConflictResult:
    """
    Resolve a violated nogood against trail reasons down to the first UIP.

    The conflict level is the highest level among the nogood's atoms; the
    assignment is expected to be at that level. Level-0 literals are dropped
    from the learned nogood since they hold in every branch.

    Args:
        conflicting: A nogood violated by the assignment
        assignment: The current assignment
        store: If given, activities of learned nogoods taking part are bumped
        bump: Called once for every atom encountered during the analysis

    Raises:
        UnsatisfiableConflict: If the conflict does not depend on any decision
    """
    conflict_level = max((assignment.level(a) for a in conflicting.atoms()), default=0)
    if conflict_level == 0:
        raise UnsatisfiableConflict("conflict at decision level 0")

    seen: Set[int] = set()
    learned: List[int] = []
    pending = 0

    def absorb(nogood: NoGood, skip: Optional[int]) -> None:
        nonlocal pending
        if store is not None and nogood.learned:
            store.bump_activity(nogood)
        for literal in nogood.literals:
            atom = literal >> 1
            if atom == skip or atom in seen:
                continue
            seen.add(atom)
            if bump is not None:
                bump(atom)
            level = assignment.level(atom)
            if level == conflict_level:
                pending += 1
            elif level > 0:
                learned.append(literal)

    absorb(conflicting, None)
    trail = assignment.trail
    index = len(trail)
    while True:
        index -= 1
        entry = trail[index]
        if entry.promotion or entry.atom not in seen or entry.level != conflict_level:
            continue
        pending -= 1
        if pending == 0:
            uip = entry.atom
            break
        absorb(entry.reason, entry.atom)

    learned.append(_holding_literal(uip, assignment))
    backjump_level = max((assignment.literal_level(lit) for lit in learned[:-1]), default=0)
    nogood = NoGood(learned, learned=True)
    nogood.lbd = compute_lbd(nogood, assignment)
    return ConflictResult(nogood, backjump_level, nogood.lbd)
