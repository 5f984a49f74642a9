"""
Parsing of normal logic programs into a validated AST.

Supported surface syntax is the `:-` / `not` / `.` fragment of ASP-Core:
facts `h.`, rules `h :- b1, ..., not bn.` and constraints `:- body.`.
Comments run from `%` to the end of the line.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import ArityError, ParseError, SafetyError

__all__ = [
    "TermKind",
    "Term",
    "Atom",
    "Rule",
    "Program",
    "parse_program",
    "validate_safety",
]


ASP_GRAMMAR = r"""
    start: statement*

    ?statement: rule
              | constraint

    rule: atom (":-" body)? "."
    constraint: ":-" body "."

    body: literal ("," literal)*

    literal: atom            -> positive_literal
           | "not" atom      -> negative_literal

    atom: IDENT ("(" term ("," term)* ")")?

    ?term: IDENT             -> constant
         | INTEGER           -> constant
         | VARIABLE          -> variable

    IDENT: /[a-z][A-Za-z0-9_]*/
    VARIABLE: /[A-Z][A-Za-z0-9_]*/
    INTEGER: /0|[1-9][0-9]*/

    COMMENT: /%[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


class TermKind(str, Enum):
    CONSTANT = "constant"
    VARIABLE = "variable"


@dataclass(frozen=True)
class Term:
    """A constant (lowercase identifier or integer) or a variable (uppercase)."""

    name: str
    kind: TermKind

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("term name cannot be empty")
        if (self.kind is TermKind.VARIABLE) != self.name[0].isupper():
            raise ValueError(f"term '{self.name}' does not match kind {self.kind.value}")

    @classmethod
    def constant(cls, name: str) -> "Term":
        return cls(name, TermKind.CONSTANT)

    @classmethod
    def variable(cls, name: str) -> "Term":
        return cls(name, TermKind.VARIABLE)

    @property
    def is_variable(self) -> bool:
        return self.kind is TermKind.VARIABLE

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    """An atom `p(t1,...,tn)`; ground if none of its terms is a variable."""

    predicate: str
    terms: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.terms)

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.predicate, len(self.terms))

    @property
    def is_ground(self) -> bool:
        return not any(t.is_variable for t in self.terms)

    def variables(self) -> FrozenSet[str]:
        return frozenset(t.name for t in self.terms if t.is_variable)

    def substitute(self, substitution: Mapping[str, Term]) -> "Atom":
        """Apply a substitution; unbound variables are kept."""
        return Atom(
            self.predicate,
            tuple(substitution.get(t.name, t) if t.is_variable else t for t in self.terms),
        )

    def __str__(self) -> str:
        if not self.terms:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Rule:
    """
    A normal rule. Constraints have no head, facts have empty bodies.

    Source positions are kept for diagnostics but do not take part in
    equality, so a re-parsed program compares equal to the original.
    """

    head: Optional[Atom]
    positive_body: Tuple[Atom, ...] = ()
    negative_body: Tuple[Atom, ...] = ()
    line: Optional[int] = field(default=None, compare=False)
    column: Optional[int] = field(default=None, compare=False)

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.positive_body and not self.negative_body

    def atoms(self) -> Iterable[Atom]:
        if self.head is not None:
            yield self.head
        yield from self.positive_body
        yield from self.negative_body

    def variables(self) -> FrozenSet[str]:
        names: set = set()
        for atom in self.atoms():
            names |= atom.variables()
        return frozenset(names)

    def __str__(self) -> str:
        body = [str(a) for a in self.positive_body] + [f"not {a}" for a in self.negative_body]
        head = str(self.head) if self.head is not None else ""
        if not body:
            return f"{head}."
        return f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}."


@dataclass(frozen=True)
class Program:
    rules: Tuple[Rule, ...] = ()

    def predicates(self) -> Dict[str, int]:
        """Map each predicate to its arity."""
        return {a.predicate: a.arity for r in self.rules for a in r.atoms()}

    def constants(self) -> FrozenSet[Term]:
        return frozenset(t for r in self.rules for a in r.atoms() for t in a.terms if not t.is_variable)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def validate_safety(rule: Rule) -> FrozenSet[str]:
    """
    Check that every variable of the head and negative body occurs in the
    positive body.

    Returns:
        The unsafe variables; empty when the rule is safe
    """
    bound: set = set()
    for atom in rule.positive_body:
        bound |= atom.variables()
    needed: set = set()
    if rule.head is not None:
        needed |= rule.head.variables()
    for atom in rule.negative_body:
        needed |= atom.variables()
    return frozenset(needed - bound)


class _AstBuilder(Transformer):
    """Turns the lark parse tree into AST objects."""

    def constant(self, children):
        return Term.constant(str(children[0]))

    def variable(self, children):
        return Term.variable(str(children[0]))

    def atom(self, children):
        return Atom(str(children[0]), tuple(children[1:]))

    def positive_literal(self, children):
        return (True, children[0])

    def negative_literal(self, children):
        return (False, children[0])

    def body(self, children):
        return children

    @v_args(meta=True)
    def rule(self, meta, children):
        body = children[1] if len(children) > 1 else []
        return _make_rule(children[0], body, meta)

    @v_args(meta=True)
    def constraint(self, meta, children):
        return _make_rule(None, children[0], meta)

    def start(self, children):
        return children


def _make_rule(head: Optional[Atom], body: List[Tuple[bool, Atom]], meta) -> Rule:
    return Rule(
        head=head,
        positive_body=tuple(a for positive, a in body if positive),
        negative_body=tuple(a for positive, a in body if not positive),
        line=getattr(meta, "line", None),
        column=getattr(meta, "column", None),
    )


_parser = Lark(ASP_GRAMMAR, parser="lalr", propagate_positions=True)


def parse_program(text: str) -> Program:
    """
    Parse program text into a Program of safe normal rules.

    Args:
        text: Program source

    Returns:
        The parsed program, rules in source order

    Raises:
        ParseError: On a syntax error, with line and column
        ArityError: If a predicate is used with two arities
        SafetyError: If a rule has unsafe variables
    """
    try:
        tree = _parser.parse(text)
        rules: List[Rule] = _AstBuilder().transform(tree)
    except UnexpectedInput as e:
        line = e.line if e.line and e.line > 0 else None
        column = e.column if line is not None else None
        raise ParseError(f"syntax error: {_describe(e)}", line=line, column=column) from None
    except VisitError as e:
        # Term validation failures surface wrapped by lark
        raise ParseError(str(e.orig_exc)) from None

    arities: Dict[str, int] = {}
    for rule in rules:
        for atom in rule.atoms():
            known = arities.setdefault(atom.predicate, atom.arity)
            if known != atom.arity:
                raise ArityError(
                    f"predicate '{atom.predicate}' used with arity {atom.arity} and {known}",
                    line=rule.line,
                    column=rule.column,
                )
        unsafe = validate_safety(rule)
        if unsafe:
            raise SafetyError(unsafe, str(rule), line=rule.line, column=rule.column)
    return Program(tuple(rules))


def _describe(error: UnexpectedInput) -> str:
    token = getattr(error, "token", None)
    if token is not None:
        return f"unexpected {token.type} '{token}'"
    char = getattr(error, "char", None)
    if char is not None:
        return f"unexpected character '{char}'"
    return "unexpected end of input"
