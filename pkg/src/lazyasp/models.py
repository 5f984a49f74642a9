from enum import Enum
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class PhasePolicy(str, Enum):
    """Initial value of the saved phase of atoms never assigned so far."""

    ALL_TRUE = "true"
    ALL_FALSE = "false"
    RANDOM = "random"


class HeuristicKind(str, Enum):
    VSIDS = "vsids"
    NAIVE = "naive"


class RestartStrategy(str, Enum):
    """
    How the static Luby sequence and the adaptive LBD trigger are combined.

    COMBINED uses the Luby value as the minimum number of conflicts between
    two restarts and the EMA comparison as the trigger. LUBY and ADAPTIVE
    use only one of the two.
    """

    COMBINED = "combined"
    LUBY = "luby"
    ADAPTIVE = "adaptive"


class Strictness(str, Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


class GroundingMode(BaseModel):
    """
    Strictness of lazy grounding per statement class.

    Strict instantiation waits until the whole positive body is assigned
    true or must-be-true; permissive instantiation only requires the positive
    body atoms to be known and not false.
    """

    model_config = ConfigDict(frozen=True)

    rules: Strictness = Field(
        default=Strictness.STRICT, description="Strictness for rules with a head"
    )
    constraints: Strictness = Field(
        default=Strictness.PERMISSIVE, description="Strictness for headless constraints"
    )

    def for_rule(self, is_constraint: bool) -> Strictness:
        return self.constraints if is_constraint else self.rules


class SolverConfig(BaseModel):
    """
    Configuration options for a solve run.

    Defaults correspond to the full configuration: dependency-driven VSIDS,
    phase saving with initial phase true, combined restarts and learned
    nogood deletion.
    """

    model_config = ConfigDict(frozen=True)

    n_answers: Optional[int] = Field(
        default=10,
        description="Number of answer sets to compute; None computes all of them",
    )
    phase_policy: PhasePolicy = Field(
        default=PhasePolicy.ALL_TRUE, description="Initial phase of atoms"
    )
    seed: int = Field(default=0, description="Seed for the random phase policy")
    heuristic: HeuristicKind = Field(
        default=HeuristicKind.VSIDS, description="Decision heuristic over choice points"
    )
    restarts: bool = Field(default=True, description="Whether restarts are enabled")
    restart_strategy: RestartStrategy = Field(
        default=RestartStrategy.COMBINED, description="Combination of Luby and adaptive restarts"
    )
    luby_unit: int = Field(default=32, ge=1, description="Conflicts per Luby step")
    ema_fast_alpha: float = Field(default=2.0**-5, gt=0.0, le=1.0)
    ema_slow_alpha: float = Field(default=2.0**-14, gt=0.0, le=1.0)
    restart_factor: float = Field(
        default=1.25, gt=0.0, description="Fast LBD average must exceed this multiple of the slow one"
    )
    restart_warmup: int = Field(
        default=50, ge=0, description="Conflicts before adaptive restarts may trigger"
    )
    deletion: bool = Field(default=True, description="Whether learned nogoods are deleted")
    deletion_base_interval: int = Field(
        default=2000, ge=1, description="Conflicts between the first two cleanups of a cycle"
    )
    deletion_interval_step: int = Field(
        default=100, ge=0, description="Growth of the cleanup interval within a cycle"
    )
    support_check: bool = Field(
        default=True, description="Turn must-be-true atoms without possible support into conflicts"
    )
    activity_decay: float = Field(
        default=0.92, gt=0.0, lt=1.0, description="Increment divisor applied after each conflict"
    )
    moms_short_size: int = Field(
        default=3, ge=1, description="Maximum size of nogoods counted by MOMs"
    )
    moms_exponent: int = Field(default=10, ge=0)
    grounding: GroundingMode = Field(default_factory=GroundingMode)
    stats: bool = Field(default=False, description="Report solving statistics")
    max_conflicts: Optional[int] = Field(default=None, description="Stop after this many conflicts")
    timeout: Optional[float] = Field(default=None, description="Stop after this many seconds")

    @field_validator("n_answers")
    @classmethod
    def validate_n_answers(cls, v: Optional[int]) -> Optional[int]:
        """Validate the answer-set limit is positive when given."""
        if v is not None and v < 1:
            raise ValueError("n_answers must be positive (or None for all)")
        return v

    @field_validator("timeout")
    @classmethod
    def validate_timeout(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v <= 0:
            raise ValueError("timeout must be positive")
        return v

    @classmethod
    def preset(cls, name: str, **overrides) -> "SolverConfig":
        """
        Build one of the named experimental configurations.

        Args:
            name: One of the keys of PRESETS
            overrides: Further field values applied on top of the preset

        Raises:
            ValueError: If the preset name is unknown
        """
        try:
            fields = PRESETS[name]
        except KeyError:
            raise ValueError(f"Unknown preset: {name}") from None
        return cls(**{**fields, **overrides})


PRESETS: Dict[str, Dict[str, object]] = {
    "baseline": {
        "heuristic": HeuristicKind.NAIVE,
        "restarts": False,
        "deletion": False,
        "support_check": False,
    },
    "vsids-true-restarts": {"phase_policy": PhasePolicy.ALL_TRUE, "restarts": True},
    "vsids-true-norestarts": {"phase_policy": PhasePolicy.ALL_TRUE, "restarts": False},
    "vsids-false-restarts": {"phase_policy": PhasePolicy.ALL_FALSE, "restarts": True},
    "vsids-false-norestarts": {"phase_policy": PhasePolicy.ALL_FALSE, "restarts": False},
    "full": {},
}
