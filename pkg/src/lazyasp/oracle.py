"""
Brute-force answer-set computation used as a testing oracle.

The program is grounded completely over its own constants. Candidate
interpretations come from guessing the truth of every atom that occurs
negatively, and each candidate is confirmed against the FLP reduct.
"""

import itertools
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

from .errors import BudgetExceededError
from .solver import AnswerSet
from .syntax import Atom, Program

__all__ = [
    "OracleRule",
    "ground_program",
    "is_stable_model",
    "brute_force_answer_sets",
    "DEFAULT_ATOM_BUDGET",
]

DEFAULT_ATOM_BUDGET = 24


class OracleRule(NamedTuple):
    head: Optional[Atom]
    positive_body: FrozenSet[Atom]
    negative_body: FrozenSet[Atom]


def ground_program(program: Program) -> List[OracleRule]:
    """Every ground instance of every rule over the program's constants."""
    constants = sorted(program.constants(), key=lambda t: t.name)
    ground: List[OracleRule] = []
    for rule in program.rules:
        variables = sorted(rule.variables())
        for values in itertools.product(constants, repeat=len(variables)):
            binding = dict(zip(variables, values))
            ground.append(
                OracleRule(
                    rule.head.substitute(binding) if rule.head is not None else None,
                    frozenset(a.substitute(binding) for a in rule.positive_body),
                    frozenset(a.substitute(binding) for a in rule.negative_body),
                )
            )
    return ground


def _least_model(rules: Iterable[Tuple[Atom, FrozenSet[Atom]]]) -> Set[Atom]:
    rules = list(rules)
    model: Set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head not in model and body <= model:
                model.add(head)
                changed = True
    return model


def _body_holds(rule: OracleRule, interpretation: FrozenSet[Atom]) -> bool:
    return rule.positive_body <= interpretation and not (rule.negative_body & interpretation)


def is_stable_model(rules: List[OracleRule], interpretation: Iterable[Atom]) -> bool:
    """
    Check that ``interpretation`` is the subset-minimal model of its FLP reduct.

    The reduct keeps the rules whose body holds in I. For a subset J of I
    the negative body literals of those rules stay true, so the minimal
    models of the reduct below I are exactly the least model of its positive
    part; I is stable iff it satisfies every rule and equals that least model.
    """
    interpretation = frozenset(interpretation)
    reduct = [r for r in rules if _body_holds(r, interpretation)]
    if any(r.head is None or r.head not in interpretation for r in reduct):
        return False
    return _least_model((r.head, r.positive_body) for r in reduct) == interpretation


def brute_force_answer_sets(program: Program, atom_budget: int = DEFAULT_ATOM_BUDGET) -> Set[AnswerSet]:
    """
    All answer sets of a small program.

    Raises:
        BudgetExceededError: If the full grounding mentions more than
            ``atom_budget`` ground atoms
    """
    rules = ground_program(program)
    atoms: Set[Atom] = set()
    for rule in rules:
        if rule.head is not None:
            atoms.add(rule.head)
        atoms |= rule.positive_body | rule.negative_body
    if len(atoms) > atom_budget:
        raise BudgetExceededError(f"full grounding has {len(atoms)} atoms, budget is {atom_budget}")

    possible = _least_model((r.head, r.positive_body) for r in rules if r.head is not None)
    guessed = sorted(
        {a for r in rules for a in r.negative_body if a in possible},
        key=str,
    )
    found: Set[AnswerSet] = set()
    for bits in itertools.product((False, True), repeat=len(guessed)):
        assumed = frozenset(a for a, bit in zip(guessed, bits) if bit)
        candidate = _least_model(
            (r.head, r.positive_body)
            for r in rules
            if r.head is not None and not (r.negative_body & assumed)
        )
        if candidate.intersection(guessed) != assumed:
            continue
        if is_stable_model(rules, candidate):
            found.add(AnswerSet(frozenset(candidate)))
    return found
