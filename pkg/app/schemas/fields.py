# app/schemas/fields.py

from fractions import Fraction
from typing import Annotated

from pydantic import PlainSerializer, PlainValidator

from app.core.errors import DomainError
from app.utils.exact_field import as_fraction


def _parse_fraction(v) -> Fraction:
    try:
        return as_fraction(v)
    except (DomainError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"expected a rational like '1/4', [1, 4] or an int, got {v!r}") from exc


# "1/4", [1, 4], 3 -> Fraction ; always serialized as a string
Rational = Annotated[Fraction, PlainValidator(_parse_fraction), PlainSerializer(str, return_type=str)]
