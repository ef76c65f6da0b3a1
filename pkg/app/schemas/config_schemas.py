# app/schemas/config_schemas.py

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.errors import ConfigError
from app.schemas.fields import Rational
from app.schemas.report_schemas import VerdictRule

SUITES = ("convolve", "exact-trace", "two-proj", "reassemble", "radial", "weak-fc", "semicircular")


class RunConfig(BaseModel):
    """One run of the workbench; every suite reads the fields it needs."""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=0, ge=0, lt=2**64)
    N: int = Field(default=512, ge=2)
    trials: int = Field(default=100, ge=1)

    # measures / exact / two-projection suites
    alpha: Optional[List[Rational]] = None
    node_count: int = Field(default=256, ge=16)
    word: Optional[Dict[str, Any]] = None
    expect: Optional[str] = None

    # reassembly
    n: int = Field(default=2, ge=2)
    traces: Optional[List[Rational]] = None
    unitary_mode: Literal["haar", "structured"] = "haar"
    generation_N: int = Field(default=64, ge=2)
    generation_seeds: int = Field(default=20, ge=1)
    bias_sizes: List[int] = [128, 256, 512]

    # radial / weak-fc / semicircular
    i: int = Field(default=1, ge=1)
    j: int = Field(default=2, ge=1)
    kind: Literal["product", "conjugated", "both"] = "both"
    t: List[float] = [1.0, 1.0]
    t_prime: List[float] = [1.0, -1.0]

    max_length: Optional[int] = Field(default=None, ge=2, le=12)
    controls: bool = True

    # output
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    tolerance: Dict[str, float] = {}
    suites: Optional[List[str]] = None

    @field_validator("alpha")
    def alpha_in_range(cls, v):
        if v is not None and any(not 0 < a <= Fraction(1, 2) for a in v):
            raise ValueError("alpha values must lie in (0, 1/2]")
        return v

    @field_validator("tolerance")
    def known_tolerances(cls, v):
        unknown = set(v) - set(VerdictRule.model_fields)
        if unknown:
            raise ValueError(f"unknown tolerance keys {sorted(unknown)}")
        return v

    @field_validator("suites")
    def known_suites(cls, v):
        if v is not None:
            unknown = set(v) - set(SUITES)
            if unknown:
                raise ValueError(f"unknown suites {sorted(unknown)}")
        return v

    @model_validator(mode="after")
    def check_indices(self):
        if not (self.i <= self.n and self.j <= self.n):
            raise ValueError(f"i and j must lie in 1..n (n = {self.n})")
        return self

    # ---------- helpers ----------

    def rule(self) -> VerdictRule:
        return VerdictRule(**self.tolerance)

    def require_trials(self, minimum: int = 30) -> None:
        if self.trials < minimum:
            raise ConfigError(f"statistical suites need at least {minimum} trials, got {self.trials}")


def load_config(path: Optional[str], overrides: Dict[str, Any]) -> RunConfig:
    """Read the JSON config file (if any) and apply flag overrides on top."""
    data: Dict[str, Any] = {}
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
