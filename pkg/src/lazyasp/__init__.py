from .logging_config import configure_logging, get_logger
from .models import GroundingMode, HeuristicKind, PhasePolicy, RestartStrategy, SolverConfig
from .syntax import Atom, Program, Rule, Term, parse_program
from .solver import AnswerSet, SolveResult, SolveStatus, Solver, solve
from .oracle import brute_force_answer_sets
from .generators import generate_colouring_instance, generate_random_program
from .errors import (
    ArityError,
    BudgetExceededError,
    LazyAspError,
    ParseError,
    ResourceLimitReached,
    SafetyError,
)

__version__ = "0.1.0"

__all__ = [
    # Logging configuration
    "configure_logging",
    "get_logger",
    # Input programs
    "parse_program",
    "Program",
    "Rule",
    "Atom",
    "Term",
    # Solving
    "solve",
    "Solver",
    "AnswerSet",
    "SolveResult",
    "SolveStatus",
    # Configuration
    "SolverConfig",
    "GroundingMode",
    "HeuristicKind",
    "PhasePolicy",
    "RestartStrategy",
    # Testing and benchmarks
    "brute_force_answer_sets",
    "generate_colouring_instance",
    "generate_random_program",
    # Errors
    "LazyAspError",
    "ParseError",
    "ArityError",
    "SafetyError",
    "BudgetExceededError",
    "ResourceLimitReached",
]
