# app/schemas/report_schemas.py

from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from app.schemas.measure_schemas import MeasureLiteral

Verdict = Literal["pass", "fail"]


class VerdictRule(BaseModel):
    """pass iff mean |trace| <= max(abs_floor, z_mult * stderr + bias_term / N)"""

    abs_floor: float = Field(default=0.04, ge=0)
    z_mult: float = Field(default=4.0, ge=0)
    bias_term: float = Field(default=10.0, ge=0)

    def threshold(self, stderr: float, N: int) -> float:
        return max(self.abs_floor, self.z_mult * stderr + self.bias_term / N)


class PatternRow(BaseModel):
    pattern: str
    mean_abs_trace: float
    stderr: float
    trials: int
    N: int
    threshold: float
    verdict: Verdict


class FreenessReport(BaseModel):
    label: str
    N: int
    trials: int
    rule: VerdictRule
    rows: List[PatternRow]
    verdict: Verdict

    @model_validator(mode="after")
    def verdict_matches_rows(self):
        expected = "pass" if all(r.mean_abs_trace <= r.threshold for r in self.rows) else "fail"
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict} does not match the rows ({expected})")
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def worst_row(self) -> Optional[PatternRow]:
        return max(self.rows, key=lambda r: r.mean_abs_trace, default=None)


class CheckRow(BaseModel):
    check: str
    value: Optional[Union[float, str]] = None
    expected: Optional[Union[float, str]] = None
    deviation: Optional[float] = None
    tolerance: Optional[float] = None
    verdict: Verdict
    detail: Optional[str] = None


class MomentEstimate(BaseModel):
    word: str
    value: float
    est_error: float


class SuiteReport(BaseModel):
    schema_version: int = Field(default=1, serialization_alias="schema")
    suite: str
    generated_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    config: Dict[str, Any]
    verdict: Verdict = "pass"
    checks: List[CheckRow] = []
    freeness: List[FreenessReport] = []
    measures: List[MeasureLiteral] = []
    summary: str = ""

    @model_validator(mode="after")
    def verdict_is_conjunction(self):
        ok = all(c.verdict == "pass" for c in self.checks) and all(f.passed for f in self.freeness)
        self.verdict = "pass" if ok else "fail"
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"
