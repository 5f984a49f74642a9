"""
Command line entry point: ``lazy-asp [options] FILE...``.

Answer sets go to stdout, statistics and logs to stderr. Exit codes: 0 when
the search ended normally (including UNSAT), 1 on usage, input or
configuration errors, 2 on internal errors, 3 when the timeout or conflict
limit stopped the search.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .errors import LazyAspError
from .generators import generate_colouring_instance
from .logging_config import configure_logging, get_logger
from .models import PRESETS, GroundingMode, HeuristicKind, PhasePolicy, RestartStrategy, SolverConfig
from .run_context import bind_run_id
from .solver import SolveStatus, Solver
from .syntax import parse_program

__all__ = ["run_cli", "main", "build_parser"]

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2
EXIT_RESOURCE_LIMIT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _answer_limit(value: str) -> Optional[int]:
    if value.lower() == "all":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'all', got '{value}'") from None


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lazy-asp", description="Lazy-grounding answer-set solver")
    parser.add_argument("files", nargs="*", metavar="FILE", help="program files ('-' for stdin)")
    parser.add_argument(
        "--n-answers",
        type=_answer_limit,
        default=argparse.SUPPRESS,
        metavar="K|all",
        help="answer sets to compute (default 10)",
    )
    parser.add_argument("--preset", choices=sorted(PRESETS), help="start from a named configuration")
    parser.add_argument("--phase-init", choices=[p.value for p in PhasePolicy])
    parser.add_argument("--restarts", type=_on_off, metavar="on|off")
    parser.add_argument("--no-restarts", dest="restarts", action="store_false")
    parser.add_argument("--restart-strategy", choices=[s.value for s in RestartStrategy])
    parser.add_argument("--deletion", type=_on_off, metavar="on|off")
    parser.add_argument("--no-deletion", dest="deletion", action="store_false")
    parser.add_argument("--deletion-interval", type=int, metavar="N", help="conflicts before the first cleanup")
    parser.add_argument("--support-check", type=_on_off, metavar="on|off")
    parser.add_argument("--heuristic", choices=[h.value for h in HeuristicKind])
    parser.add_argument("--luby-unit", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grounding-rules", choices=["strict", "permissive"], default="strict")
    parser.add_argument("--grounding-constraints", choices=["strict", "permissive"], default="permissive")
    parser.add_argument("--max-conflicts", type=int)
    parser.add_argument("--timeout", type=float, help="seconds")
    parser.add_argument("--stats", action="store_true", default=None, help="print statistics to stderr")
    parser.add_argument(
        "--log-level", type=str.upper, default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    parser.add_argument(
        "--generate-colouring",
        nargs=4,
        metavar=("VERTICES", "P", "COLOURS", "SEED"),
        help="print a random colouring instance instead of solving",
    )
    parser.set_defaults(restarts=None, deletion=None, support_check=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> SolverConfig:
    overrides: Dict[str, object] = {
        "grounding": GroundingMode(rules=args.grounding_rules, constraints=args.grounding_constraints),
    }
    options = {
        "phase_policy": args.phase_init,
        "restarts": args.restarts,
        "restart_strategy": args.restart_strategy,
        "deletion": args.deletion,
        "deletion_base_interval": args.deletion_interval,
        "support_check": args.support_check,
        "heuristic": args.heuristic,
        "luby_unit": args.luby_unit,
        "seed": args.seed,
        "max_conflicts": args.max_conflicts,
        "timeout": args.timeout,
        "stats": args.stats,
    }
    overrides.update({k: v for k, v in options.items() if v is not None})
    if "n_answers" in args:
        overrides["n_answers"] = args.n_answers
    if args.preset:
        return SolverConfig.preset(args.preset, **overrides)
    return SolverConfig(**overrides)


def _read_program_text(files: Sequence[str], stdin: TextIO) -> str:
    parts = []
    for name in files:
        parts.append(stdin.read() if name == "-" else Path(name).read_text())
    return "\n".join(parts)


def _generate(values: List[str], stdout: TextIO) -> int:
    try:
        vertices, probability, colours, seed = int(values[0]), float(values[1]), int(values[2]), int(values[3])
    except ValueError:
        raise UsageError("--generate-colouring expects VERTICES P COLOURS SEED") from None
    stdout.write(generate_colouring_instance(vertices, probability, colours, seed))
    return EXIT_OK


def run_cli(
    argv: Optional[Sequence[str]] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Run the solver on the command line arguments and return the exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.log_level)
        if args.generate_colouring:
            return _generate(args.generate_colouring, stdout)
        if not args.files:
            raise UsageError("no input files")
        config = _config_from_args(args)
        program = parse_program(_read_program_text(args.files, stdin))
    except (UsageError, LazyAspError, OSError, ValidationError, ValueError) as e:
        stderr.write(f"lazy-asp: error: {e}\n")
        return EXIT_USAGE

    try:
        with bind_run_id():
            solver = Solver(program, config)
            for index, answer in enumerate(solver.answer_sets(), start=1):
                stdout.write(f"Answer set {index}: {answer}\n")
                stdout.flush()
    except Exception:
        logger.error("internal error", exc_info=True)
        stderr.write("lazy-asp: internal error\n")
        return EXIT_INTERNAL

    status = solver.status
    if status is SolveStatus.UNSAT:
        stdout.write("UNSATISFIABLE\n")
    elif status is SolveStatus.RESOURCE_LIMIT:
        stdout.write("INTERRUPTED\n")
    if config.stats:
        stderr.write(f"status={status.value}\n")
        for line in solver.statistics.lines():
            stderr.write(line + "\n")
    return EXIT_RESOURCE_LIMIT if status is SolveStatus.RESOURCE_LIMIT else EXIT_OK


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
