"""
Lazy bottom-up grounding.

Rules are instantiated only once their positive body may hold under the
current assignment, and each ground rule is translated into nogoods. Rules
with a negative body get a synthetic body atom that the solver guesses on.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional, Set, Tuple

from .assignment import Assignment, AssignmentListener, TruthValue
from .atoms import AtomTable, NoGood, neg, pos
from .logging_config import get_logger
from .models import GroundingMode, Strictness
from .syntax import Atom, Program, Rule, Term

__all__ = ["GroundRule", "Translation", "Grounder", "rule_to_nogoods", "unify"]

logger = get_logger(__name__)

Binding = Dict[str, Term]


@dataclass(frozen=True)
class GroundRule:
    """
    A ground instance rσ of an input rule, over atom ids.

    ``substitution`` lists (variable, constant) pairs sorted by variable name.
    ``body_atom`` is set exactly for rules with a head and a non-empty
    negative body.
    """

    rule_id: int
    substitution: Tuple[Tuple[str, Term], ...]
    head: Optional[int]
    positive_body: Tuple[int, ...]
    negative_body: Tuple[int, ...]
    body_atom: Optional[int] = None

    @property
    def is_constraint(self) -> bool:
        return self.head is None


class Translation(NamedTuple):
    nogoods: List[NoGood]
    choice_point: Optional[int]


def rule_to_nogoods(rule: GroundRule) -> Translation:
    """
    Translate a ground rule into nogoods.

    Constraints become one nogood over their body. Rules without negation get
    a head-derivation nogood. Rules with negation are split over their body
    atom β: β must hold when the body holds, β implies every body literal, and
    β derives the head. β is returned as a choice point.

    Nogoods containing an atom with both signs are dropped since they can
    never be violated.
    """
    body = [pos(a) for a in rule.positive_body] + [neg(a) for a in rule.negative_body]
    candidates: List[Tuple[List[int], Optional[int]]] = []
    if rule.head is None:
        candidates.append((body, None))
    elif rule.body_atom is None:
        candidates.append((body, neg(rule.head)))
    else:
        beta = rule.body_atom
        candidates.append((body, neg(beta)))
        candidates.extend(([pos(beta), neg(b)], None) for b in rule.positive_body)
        candidates.extend(([pos(beta), pos(b)], None) for b in rule.negative_body)
        candidates.append(([pos(beta)], neg(rule.head)))

    nogoods = []
    for literals, head in candidates:
        full = literals + [head] if head is not None else literals
        if NoGood.is_tautology(full):
            continue
        nogoods.append(NoGood(literals, head_literal=head))
    return Translation(nogoods, rule.body_atom)


def unify(pattern: Atom, ground: Atom, binding: Binding) -> Optional[Binding]:
    """Extend ``binding`` so that ``pattern`` matches ``ground``; both share a signature."""
    extended: Optional[Binding] = None
    for term, value in zip(pattern.terms, ground.terms):
        if not term.is_variable:
            if term != value:
                return None
            continue
        current = (extended or binding).get(term.name)
        if current is None:
            if extended is None:
                extended = dict(binding)
            extended[term.name] = value
        elif current != value:
            return None
    return extended if extended is not None else binding


class Grounder(AssignmentListener):
    """
    Semi-naive lazy grounder.

    Tracks which atoms became eligible as positive body atoms since the last
    step and only joins rule bodies through those atoms. Strict statements
    need their positive body assigned TRUE or MBT; permissive statements
    need it known and not FALSE. Every (rule, substitution) pair is emitted
    at most once per run.

    A join seeded by an atom that passed over no ineligible candidate has
    produced every instance through that atom over the atoms known at the
    time. Such a seed is not joined again until new atoms of one of the
    rule's positive body predicates have been interned, so atoms that come
    back after a backjump do not repeat old work.
    """

    def __init__(self, program: Program, table: AtomTable, mode: Optional[GroundingMode] = None):
        self.program = program
        self.table = table
        self.mode = mode or GroundingMode()
        self._rules: List[Rule] = list(program.rules)
        self._strictness: List[Strictness] = [self.mode.for_rule(r.is_constraint) for r in self._rules]
        self._variables: List[Tuple[str, ...]] = [tuple(sorted(r.variables())) for r in self._rules]
        self._emitted: Set[Tuple[int, Tuple[Term, ...]]] = set()
        self._strict_delta: Set[int] = set()
        self._permissive_delta: Set[int] = set()
        self._first_step = True
        self._complete: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
        self._blocked = False
        self.rules_emitted = 0
        self.joins = 0
        table.add_growth_observer(self._on_new_atom)

    def _on_new_atom(self, atom_id: int) -> None:
        self._permissive_delta.add(atom_id)

    def on_assign(self, atom: int, value: TruthValue, promotion: bool) -> None:
        if value is not TruthValue.FALSE and not promotion:
            self._strict_delta.add(atom)

    def on_unassign(self, atom: int, value: TruthValue) -> None:
        if value is TruthValue.FALSE:
            self._permissive_delta.add(atom)

    def _eligible(self, atom: int, strictness: Strictness, assignment: Assignment) -> bool:
        value = assignment.value(atom)
        if strictness is Strictness.STRICT:
            return value is TruthValue.TRUE or value is TruthValue.MBT
        return value is not TruthValue.FALSE

    def ground_step(self, assignment: Assignment) -> List[GroundRule]:
        """
        Instantiate every not yet emitted rule instance whose positive body is
        eligible under the assignment.

        Returns:
            The new ground rules; empty at a grounding fixpoint
        """
        strict_delta, self._strict_delta = self._strict_delta, set()
        permissive_delta, self._permissive_delta = self._permissive_delta, set()
        first, self._first_step = self._first_step, False

        new_rules: List[GroundRule] = []
        for rule_id, rule in enumerate(self._rules):
            strictness = self._strictness[rule_id]
            if first:
                bindings = list(self._join(rule, strictness, assignment, None, None))
            else:
                delta = strict_delta if strictness is Strictness.STRICT else permissive_delta
                if not delta:
                    continue
                bindings = []
                sizes = self._body_sizes(rule)
                for position, pattern in enumerate(rule.positive_body):
                    for atom_id in self._delta_matches(pattern, delta):
                        key = (rule_id, position, atom_id)
                        if self._complete.get(key) == sizes:
                            continue
                        self._blocked = False
                        bindings.extend(self._join(rule, strictness, assignment, position, atom_id))
                        if self._blocked:
                            self._complete.pop(key, None)
                        else:
                            self._complete[key] = sizes
            for binding in bindings:
                grounded = self._instantiate(rule_id, rule, binding)
                if grounded is not None:
                    new_rules.append(grounded)

        if new_rules:
            self.rules_emitted += len(new_rules)
            logger.debug("grounding step", new_rules=len(new_rules), atoms=len(self.table))
        return new_rules

    def _body_sizes(self, rule: Rule) -> Tuple[int, ...]:
        return tuple(len(self.table.with_signature(*p.signature)) for p in rule.positive_body)

    def _delta_matches(self, pattern: Atom, delta: Set[int]) -> Iterator[int]:
        for atom_id in delta:
            if self.table.is_body_atom(atom_id):
                continue
            if self.table.lookup(atom_id).signature == pattern.signature:
                yield atom_id

    def _join(
        self,
        rule: Rule,
        strictness: Strictness,
        assignment: Assignment,
        seed_position: Optional[int],
        seed_atom: Optional[int],
    ) -> Iterator[Binding]:
        """Enumerate bindings of the positive body, optionally fixing one body atom."""
        binding: Binding = {}
        order = list(range(len(rule.positive_body)))
        if seed_position is not None:
            self.joins += 1
            if not self._eligible(seed_atom, strictness, assignment):
                self._blocked = True
                return
            seeded = unify(rule.positive_body[seed_position], self.table.lookup(seed_atom), binding)
            if seeded is None:
                return
            binding = seeded
            order.remove(seed_position)
        yield from self._extend(rule.positive_body, order, 0, binding, strictness, assignment)

    def _extend(
        self,
        body: Tuple[Atom, ...],
        order: List[int],
        index: int,
        binding: Binding,
        strictness: Strictness,
        assignment: Assignment,
    ) -> Iterator[Binding]:
        if index == len(order):
            yield binding
            return
        pattern = body[order[index]]
        for atom_id in list(self._candidates(pattern, binding)):
            if not self._eligible(atom_id, strictness, assignment):
                self._blocked = True
                continue
            extended = unify(pattern, self.table.lookup(atom_id), binding)
            if extended is not None:
                yield from self._extend(body, order, index + 1, extended, strictness, assignment)

    def _candidates(self, pattern: Atom, binding: Binding) -> List[int]:
        if pattern.terms:
            first = pattern.terms[0]
            if first.is_variable:
                first = binding.get(first.name)
            if first is not None:
                return self.table.with_first_argument(pattern.predicate, pattern.arity, first)
        return self.table.with_signature(pattern.predicate, pattern.arity)

    def _instantiate(self, rule_id: int, rule: Rule, binding: Binding) -> Optional[GroundRule]:
        variables = self._variables[rule_id]
        key = (rule_id, tuple(binding[v] for v in variables))
        if key in self._emitted:
            return None
        self._emitted.add(key)

        table = self.table
        head = table.intern(rule.head.substitute(binding)) if rule.head is not None else None
        positive = tuple(table.intern(a.substitute(binding)) for a in rule.positive_body)
        negative = tuple(table.intern(a.substitute(binding)) for a in rule.negative_body)
        body_atom = table.intern_body_atom(rule_id, key[1]) if negative and head is not None else None
        return GroundRule(
            rule_id=rule_id,
            substitution=tuple(zip(variables, key[1])),
            head=head,
            positive_body=positive,
            negative_body=negative,
            body_atom=body_atom,
        )

    def describe(self, rule: GroundRule) -> str:
        """Render a ground rule with atom names, for logs and tests."""
        name = self.table.lookup
        body = [str(name(a)) for a in rule.positive_body] + [f"not {name(a)}" for a in rule.negative_body]
        head = str(name(rule.head)) if rule.head is not None else ""
        if not body:
            return f"{head}."
        return f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}."
