# app/schemas/measure_schemas.py

from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.core.errors import DomainError
from app.models.measure_model import AtomicMeasure


class MeasureLiteral(BaseModel):
    """{"atoms": [[location, mass_numerator, mass_denominator], ...]}"""

    model_config = ConfigDict(extra="forbid")

    atoms: List[Tuple[float, int, int]]
    label: Optional[str] = None

    @field_validator("atoms")
    def positive_masses(cls, v):
        if not v:
            raise ValueError("a measure needs at least one atom")
        for x, num, den in v:
            if den <= 0:
                raise ValueError(f"atom at {x}: mass denominator must be positive, got {den}")
            if num <= 0:
                raise ValueError(f"atom at {x}: mass numerator must be positive, got {num}")
        return v

    @model_validator(mode="after")
    def is_probability_measure(self):
        try:
            self.to_measure()
        except DomainError as exc:
            raise ValueError(str(exc)) from None
        return self

    def to_measure(self) -> AtomicMeasure:
        return AtomicMeasure(tuple((x, Fraction(num, den)) for x, num, den in self.atoms))

    @classmethod
    def from_measure(cls, measure: AtomicMeasure, label: Optional[str] = None) -> "MeasureLiteral":
        return cls(atoms=[(x, m.numerator, m.denominator) for x, m in measure.atoms], label=label)
