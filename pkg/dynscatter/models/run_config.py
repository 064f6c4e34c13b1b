"""Validated configuration of one CLI invocation."""

from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dynscatter.models.complex_value import ComplexValue
from dynscatter.models.design_spec import DesignGoal
from dynscatter.numerics import IntegratorConfig

Command = Literal["scatter", "sweep", "design", "verify", "trajectory"]
RouteName = Literal["evolution", "jost", "s", "auto"]
Range = Tuple[float, float, int]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    potential: Optional[Dict[str, Any]] = None
    k: Optional[float] = None
    k_range: Optional[Range] = None
    route: RouteName = "auto"
    goal: Optional[DesignGoal] = None
    gamma: ComplexValue = 1e-6 + 0j
    k0L: Optional[float] = None
    k0L_range: Optional[Range] = None
    k0: float = Field(default=1.0, gt=0)
    dispersive: bool = True
    out: Optional[Path] = None
    format: Literal["csv", "json"] = "json"
    profile_out: Optional[Path] = None
    points: int = Field(default=1001, ge=2)
    threads: Optional[int] = Field(default=None, ge=1)
    rel_tol: Optional[float] = Field(default=None, gt=0)
    abs_tol: Optional[float] = Field(default=None, gt=0)
    check_tol: Optional[float] = Field(default=None, gt=0)

    @field_validator("k", "k0L")
    @classmethod
    def _positive(cls, v):
        if v is not None and not v > 0:
            raise ValueError("must be strictly positive")
        return v

    @field_validator("k_range", "k0L_range")
    @classmethod
    def _nonempty_range(cls, v):
        if v is None:
            return v
        lo, hi, n = v
        if not lo > 0:
            raise ValueError("range start must be strictly positive")
        if n < 1:
            raise ValueError("range needs at least one point")
        if hi < lo or (hi == lo and n > 1):
            raise ValueError("range is empty")
        return v

    @model_validator(mode="after")
    def _required_by_command(self) -> "RunConfig":
        missing = []
        if self.command in ("scatter", "trajectory"):
            if self.potential is None:
                missing.append("--potential")
            if self.k is None:
                missing.append("--k")
        elif self.command == "sweep":
            design_sweep = self.goal is not None or self.k0L_range is not None
            if design_sweep:
                if self.goal is not DesignGoal.RIGHT_INVISIBLE:
                    raise ValueError("design sweeps are available for --goal uinv only")
                if self.k0L_range is None:
                    missing.append("--k0L-range")
            else:
                if self.potential is None:
                    missing.append("--potential")
                if self.k_range is None:
                    missing.append("--k-range")
        elif self.command == "design":
            if self.goal is None:
                missing.append("--goal")
            if self.k0L is None:
                missing.append("--k0L")
        if missing:
            raise ValueError(f"{self.command} requires {', '.join(missing)}")
        return self

    def integrator_config(self) -> IntegratorConfig:
        overrides = {}
        if self.rel_tol is not None:
            overrides["rel_tol"] = self.rel_tol
        if self.abs_tol is not None:
            overrides["abs_tol"] = self.abs_tol
        return IntegratorConfig(**overrides)
