"""
On-demand support checks for must-be-true atoms.

Lazy grounding never knows all rules of an atom, so there are no completion
nogoods that would catch a must-be-true atom whose rules are all blocked.
Instead, the rule instances that could ever derive such an atom are
enumerated over a static over-approximation of the derivable atoms. Once
every one of them has a body literal that is false under the assignment,
the atom together with those literals forms a violated nogood.
"""

from collections import defaultdict
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from .assignment import Assignment, TruthValue
from .atoms import BODY_PREFIX, AtomTable, NoGood, neg, pos
from .grounding import Binding, unify
from .logging_config import get_logger
from .syntax import Atom, Program, Rule, Term

__all__ = ["AtomIndex", "SupportInstance", "SupportCheck", "possible_atoms"]

logger = get_logger(__name__)


class AtomIndex:
    """A set of ground atoms indexed by signature and by first argument."""

    def __init__(self) -> None:
        self._atoms: Set[Atom] = set()
        self._by_signature: Dict[Tuple[str, int], List[Atom]] = defaultdict(list)
        self._by_first: Dict[Tuple[str, int, Term], List[Atom]] = defaultdict(list)

    def __contains__(self, atom: object) -> bool:
        return atom in self._atoms

    def __len__(self) -> int:
        return len(self._atoms)

    def add(self, atom: Atom) -> bool:
        """Add a ground atom; False if it was already present."""
        if atom in self._atoms:
            return False
        self._atoms.add(atom)
        self._by_signature[atom.signature].append(atom)
        if atom.terms:
            self._by_first[(atom.predicate, atom.arity, atom.terms[0])].append(atom)
        return True

    def candidates(self, pattern: Atom, binding: Binding) -> List[Atom]:
        if pattern.terms:
            first = pattern.terms[0]
            if first.is_variable:
                first = binding.get(first.name)
            if first is not None:
                return list(self._by_first.get((pattern.predicate, pattern.arity, first), ()))
        return list(self._by_signature.get(pattern.signature, ()))


def join(patterns: Sequence[Atom], index: AtomIndex, binding: Binding) -> Iterator[Binding]:
    """Every extension of ``binding`` mapping all patterns onto atoms of the index."""
    if not patterns:
        yield binding
        return
    first, rest = patterns[0], patterns[1:]
    for atom in index.candidates(first, binding):
        extended = unify(first, atom, binding)
        if extended is not None:
            yield from join(rest, index, extended)


def possible_atoms(program: Program) -> AtomIndex:
    """
    Atoms true in at least one answer set are among these: the least model of
    the program with negative bodies and constraints dropped.
    """
    index = AtomIndex()
    rules = [r for r in program.rules if r.head is not None]
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for binding in list(join(rule.positive_body, index, {})):
                if index.add(rule.head.substitute(binding)):
                    changed = True
    return index


class SupportInstance(NamedTuple):
    """A ground rule instance that could derive some atom."""

    body_atom: Optional[Atom]
    positive_body: Tuple[Atom, ...]
    negative_body: Tuple[Atom, ...]


class SupportCheck:
    """
    Finds must-be-true atoms that no rule instance can derive any more.

    A blocked instance is one whose body atom is FALSE, with a FALSE
    positive body atom, or with a TRUE or MBT negative body atom. The
    resulting nogood holds in every answer set: an atom all of whose
    possible instances are blocked has no support.
    """

    MAX_UNFOUNDED = 64

    def __init__(self, program: Program, table: AtomTable):
        self.program = program
        self.table = table
        self._rules: Dict[Tuple[str, int], List[Tuple[int, Rule, Tuple[str, ...]]]] = defaultdict(list)
        for rule_id, rule in enumerate(program.rules):
            if rule.head is not None:
                self._rules[rule.head.signature].append((rule_id, rule, tuple(sorted(rule.variables()))))
        self._possible: Optional[AtomIndex] = None
        self._instances: Dict[Atom, List[SupportInstance]] = {}
        self.explained = 0

    @property
    def possible(self) -> AtomIndex:
        if self._possible is None:
            self._possible = possible_atoms(self.program)
            logger.debug("possible atoms computed", atoms=len(self._possible))
        return self._possible

    def instances(self, atom: Atom) -> List[SupportInstance]:
        """Every rule instance with head ``atom`` whose positive body is possible."""
        cached = self._instances.get(atom)
        if cached is not None:
            return cached
        found = []
        for rule_id, rule, variables in self._rules.get(atom.signature, ()):
            binding = unify(rule.head, atom, {})
            if binding is None:
                continue
            for full in join(rule.positive_body, self.possible, binding):
                values = tuple(full[v] for v in variables)
                found.append(
                    SupportInstance(
                        Atom(f"{BODY_PREFIX}{rule_id}", values) if rule.negative_body else None,
                        tuple(a.substitute(full) for a in rule.positive_body),
                        tuple(a.substitute(full) for a in rule.negative_body),
                    )
                )
        self._instances[atom] = found
        return found

    def _blocker(self, instance: SupportInstance, assignment: Assignment) -> Optional[int]:
        table = self.table
        if instance.body_atom is not None:
            # only grounded instances have a body atom
            body_atom = table.get(instance.body_atom)
            if body_atom is not None and assignment.value(body_atom) is TruthValue.FALSE:
                return neg(body_atom)
        for atom in instance.positive_body:
            atom_id = table.get(atom)
            if atom_id is not None and assignment.value(atom_id) is TruthValue.FALSE:
                return neg(atom_id)
        for atom in instance.negative_body:
            atom_id = table.get(atom)
            if atom_id is not None and assignment.value(atom_id).is_positive:
                return pos(atom_id)
        return None

    def _open_atom(self, instance: SupportInstance, assignment: Assignment) -> Optional[Atom]:
        """A positive body atom of the instance that is not derived yet."""
        for atom in instance.positive_body:
            atom_id = self.table.get(atom)
            if atom_id is None or assignment.value(atom_id) is not TruthValue.TRUE:
                return atom
        return None

    def explain(self, atom_id: int, assignment: Assignment) -> Optional[NoGood]:
        """
        The nogood showing that ``atom_id`` has lost all support.

        Starting from the atom, a set of atoms is grown in which every rule
        instance is blocked or depends positively on a member of the set.
        Such a set is unfounded: none of its atoms is true in an answer set
        where the blocking literals hold.

        Returns:
            A nogood violated by the assignment, or None while some instance
            may still derive the atom
        """
        root = self.table.lookup(atom_id)
        unfounded = {root}
        pending = [root]
        blockers: Dict[int, None] = {}
        while pending:
            atom = pending.pop()
            for instance in self.instances(atom):
                if any(b in unfounded for b in instance.positive_body):
                    continue
                blocker = self._blocker(instance, assignment)
                if blocker is not None:
                    blockers[blocker] = None
                    continue
                open_atom = self._open_atom(instance, assignment)
                if open_atom is None or len(unfounded) >= self.MAX_UNFOUNDED:
                    return None
                unfounded.add(open_atom)
                pending.append(open_atom)
        return NoGood([pos(atom_id), *blockers])

    def find_unsupported(self, assignment: Assignment) -> Optional[NoGood]:
        """Explain the first must-be-true ordinary atom without support, if any."""
        if not assignment.has_mbt:
            return None
        for atom_id in assignment.mbt_atoms():
            if self.table.is_body_atom(atom_id):
                continue
            nogood = self.explain(atom_id, assignment)
            if nogood is not None:
                self.explained += 1
                logger.debug("unsupported atom", atom=str(self.table.lookup(atom_id)), size=len(nogood))
                return nogood
        return None
