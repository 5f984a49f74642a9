"""
Desk-scale benchmark harness.

Runs named configuration arms over seeded colouring instances, each run
bounded by a per-instance time budget, and counts solved instances. An
instance counts as solved if the run ends for any reason other than the
resource limit.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .generators import COLOURING_PRESETS, generate_colouring_instance
from .logging_config import get_logger
from .models import SolverConfig
from .solver import SolveStatus, solve
from .syntax import parse_program

__all__ = ["InstanceRun", "ArmReport", "run_benchmark", "DEFAULT_ARMS"]

logger = get_logger(__name__)

DEFAULT_ARMS = ("baseline", "full")


@dataclass
class InstanceRun:
    seed: int
    status: SolveStatus
    answer_sets: int
    seconds: float

    @property
    def solved(self) -> bool:
        return self.status is not SolveStatus.RESOURCE_LIMIT


@dataclass
class ArmReport:
    arm: str
    runs: List[InstanceRun] = field(default_factory=list)

    @property
    def solved(self) -> int:
        return sum(1 for r in self.runs if r.solved)

    @property
    def total_seconds(self) -> float:
        return sum(r.seconds for r in self.runs)

    def summary(self) -> str:
        return f"arm={self.arm} solved={self.solved}/{len(self.runs)} time={self.total_seconds:.2f}"


def run_benchmark(
    seeds: Sequence[int],
    arms: Sequence[str] = DEFAULT_ARMS,
    preset: str = "hard",
    timeout: float = 10.0,
    n_answers: Optional[int] = 10,
) -> Dict[str, ArmReport]:
    """
    Solve every seeded instance under every arm.

    Args:
        seeds: One colouring instance is generated per seed
        arms: Names of SolverConfig presets
        preset: Key of COLOURING_PRESETS
        timeout: Per-instance budget in seconds
        n_answers: Answer sets requested per instance

    Returns:
        One report per arm, keyed by arm name

    Raises:
        ValueError: If an arm or preset name is unknown
    """
    try:
        shape = COLOURING_PRESETS[preset]
    except KeyError:
        raise ValueError(f"Unknown colouring preset: {preset}") from None
    configs = {arm: SolverConfig.preset(arm, timeout=timeout, n_answers=n_answers) for arm in arms}
    programs = {
        seed: parse_program(
            generate_colouring_instance(shape.vertices, shape.edge_probability, shape.colours, seed)
        )
        for seed in seeds
    }

    reports = {arm: ArmReport(arm) for arm in arms}
    for arm, config in configs.items():
        for seed, program in programs.items():
            started = time.monotonic()
            result = solve(program, config)
            run = InstanceRun(seed, result.status, len(result.answer_sets), time.monotonic() - started)
            reports[arm].runs.append(run)
            logger.info(
                "benchmark run",
                arm=arm,
                seed=seed,
                status=run.status.value,
                answer_sets=run.answer_sets,
                seconds=round(run.seconds, 3),
            )
    return reports
