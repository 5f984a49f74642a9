"""
Ground atom interning and the nogood representation.

Literals are plain ints: ``2 * atom_id + 1`` for the positive sign and
``2 * atom_id`` for the negative sign. A nogood is violated once every
positive-sign literal's atom is true (TRUE or MBT) and every negative-sign
literal's atom is FALSE.
"""

from collections import defaultdict
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .syntax import Atom, Term

__all__ = [
    "pos",
    "neg",
    "atom_of",
    "is_positive",
    "complement",
    "AtomTable",
    "NoGood",
    "BODY_PREFIX",
]

BODY_PREFIX = "_body"


def pos(atom: int) -> int:
    return (atom << 1) | 1


def neg(atom: int) -> int:
    return atom << 1


def atom_of(literal: int) -> int:
    return literal >> 1


def is_positive(literal: int) -> bool:
    return bool(literal & 1)


def complement(literal: int) -> int:
    return literal ^ 1


class AtomTable:
    """
    Bidirectional map between ground atoms and dense integer ids.

    Ids are handed out once, in increasing order, and never reused. Body
    atoms are synthetic atoms standing for the body of one ground rule; they
    are stored alongside ordinary atoms but are never part of an answer set.
    """

    def __init__(self) -> None:
        self._atoms: List[Atom] = []
        self._ids: Dict[Atom, int] = {}
        self._is_body: List[bool] = []
        self._by_predicate: Dict[Tuple[str, int], List[int]] = defaultdict(list)
        self._by_first_arg: Dict[Tuple[str, int, Term], List[int]] = defaultdict(list)
        self._observers: List[Callable[[int], None]] = []

    def __len__(self) -> int:
        return len(self._atoms)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._ids

    def add_growth_observer(self, observer: Callable[[int], None]) -> None:
        """Register a callback invoked with every newly allocated id."""
        self._observers.append(observer)

    def intern(self, atom: Atom) -> int:
        """
        Return the id of a ground atom, allocating the next id if it is new.

        Raises:
            ValueError: If the atom is not ground
        """
        known = self._ids.get(atom)
        if known is not None:
            return known
        if not atom.is_ground:
            raise ValueError(f"cannot intern non-ground atom {atom}")
        return self._allocate(atom, is_body=False)

    def intern_body_atom(self, rule_id: int, substitution: Sequence[Term]) -> int:
        """Return the id of the body atom of ground rule (rule_id, substitution)."""
        atom = Atom(f"{BODY_PREFIX}{rule_id}", tuple(substitution))
        known = self._ids.get(atom)
        if known is not None:
            return known
        return self._allocate(atom, is_body=True)

    def _allocate(self, atom: Atom, is_body: bool) -> int:
        atom_id = len(self._atoms)
        self._atoms.append(atom)
        self._ids[atom] = atom_id
        self._is_body.append(is_body)
        if not is_body:
            self._by_predicate[atom.signature].append(atom_id)
            if atom.terms:
                self._by_first_arg[(atom.predicate, atom.arity, atom.terms[0])].append(atom_id)
        for observer in self._observers:
            observer(atom_id)
        return atom_id

    def get(self, atom: Atom) -> Optional[int]:
        return self._ids.get(atom)

    def lookup(self, atom_id: int) -> Atom:
        return self._atoms[atom_id]

    def is_body_atom(self, atom_id: int) -> bool:
        return self._is_body[atom_id]

    def with_signature(self, predicate: str, arity: int) -> List[int]:
        """Ids of ordinary atoms of the given predicate (live list, do not mutate)."""
        return self._by_predicate.get((predicate, arity), [])

    def with_first_argument(self, predicate: str, arity: int, first: Term) -> List[int]:
        return self._by_first_arg.get((predicate, arity, first), [])

    def ordinary_atoms(self) -> Iterator[int]:
        return (i for i, body in enumerate(self._is_body) if not body)


class NoGood:
    """
    A set of literals that must not hold together.

    ``head`` is the index of the literal whose atom the nogood derives with
    TRUE strength (head-derivation nogoods); it always marks a negative-sign
    literal. ``lbd`` is only set for learned nogoods. ``watches`` is owned by
    the NoGoodStore the nogood is added to.
    """

    __slots__ = ("literals", "head", "activity", "lbd", "learned", "watches")

    def __init__(
        self,
        literals: Iterable[int],
        head_literal: Optional[int] = None,
        learned: bool = False,
        lbd: Optional[int] = None,
    ):
        ordered = list(dict.fromkeys(literals))
        if head_literal is not None:
            if is_positive(head_literal):
                raise ValueError("the head literal of a nogood must have negative sign")
            if head_literal not in ordered:
                ordered.append(head_literal)
        if len({atom_of(lit) for lit in ordered}) != len(ordered):
            raise ValueError("nogood contains an atom with both signs")
        self.literals: Tuple[int, ...] = tuple(ordered)
        self.head: Optional[int] = (
            self.literals.index(head_literal) if head_literal is not None else None
        )
        self.activity: float = 0.0
        self.lbd: Optional[int] = lbd
        self.learned: bool = learned
        self.watches: List[int] = []

    @classmethod
    def of(
        cls,
        positive: Iterable[int] = (),
        negative: Iterable[int] = (),
        head: Optional[int] = None,
    ) -> "NoGood":
        """Build a nogood from atom ids; ``head`` is an atom id added negatively."""
        literals = [pos(a) for a in positive] + [neg(a) for a in negative]
        return cls(literals, head_literal=neg(head) if head is not None else None)

    @staticmethod
    def is_tautology(literals: Iterable[int]) -> bool:
        """True if some atom occurs with both signs, so the nogood can never be violated."""
        seen = set(literals)
        return any(complement(lit) in seen for lit in seen)

    @property
    def head_literal(self) -> Optional[int]:
        return self.literals[self.head] if self.head is not None else None

    @property
    def head_atom(self) -> Optional[int]:
        return atom_of(self.literals[self.head]) if self.head is not None else None

    def atoms(self) -> Iterator[int]:
        return (atom_of(lit) for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[int]:
        return iter(self.literals)

    def __repr__(self) -> str:
        parts = [("+" if is_positive(lit) else "-") + str(atom_of(lit)) for lit in self.literals]
        head = f" head={self.head_atom}" if self.head is not None else ""
        return f"NoGood({{{', '.join(parts)}}}{head})"
