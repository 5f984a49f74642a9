"""
Exception hierarchy for lazyasp.

Input problems (syntax, arity, safety) subclass ValueError so callers that
only care about "bad input" can catch that.
"""

from typing import Iterable, Optional


class LazyAspError(Exception):
    """Root of all errors raised by lazyasp."""


class ParseError(LazyAspError, ValueError):
    """Malformed program text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{location}{message}")


class ArityError(ParseError):
    """A predicate is used with two different arities."""


class SafetyError(ParseError):
    """A rule has variables that do not occur in its positive body."""

    def __init__(
        self,
        variables: Iterable[str],
        rule_text: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.variables = sorted(set(variables))
        self.rule_text = rule_text
        super().__init__(
            f"unsafe variables {', '.join(self.variables)} in rule '{rule_text}'",
            line=line,
            column=column,
        )


class BudgetExceededError(LazyAspError):
    """The brute-force oracle was asked to enumerate too many ground atoms."""


class ResourceLimitReached(LazyAspError):
    """A solve run hit its timeout or conflict limit."""


class UnsatisfiableConflict(LazyAspError):
    """A conflict was derived at decision level 0."""
