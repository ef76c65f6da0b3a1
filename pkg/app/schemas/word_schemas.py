# app/schemas/word_schemas.py

from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from app.models.algebra_model import FiniteAbelianAlgebra, FreeWord
from app.schemas.fields import Rational
from app.utils.exact_field import exact_field


class ComplexLiteral(BaseModel):
    re: Rational = 0
    im: Rational = 0


Scalar = Union[Rational, ComplexLiteral]


class AlgebraLiteral(BaseModel):
    id: int
    weights: List[Rational]


class LetterLiteral(BaseModel):
    algebra: int
    values: List[Scalar]


class WordRequest(BaseModel):
    """
    JSON form of an exact-trace query.

    Either spell out algebras and letters::

        {"algebras": [{"id": 1, "weights": ["1/2", "1/2"]}, ...],
         "word": [{"algebra": 1, "values": [1, 0]}, ...]}

    or name projections by their traces, each in its own two-atom algebra::

        {"projections": {"p": "1/2", "q": "1/2"}, "word": ["p", "q", "p", "q"]}
    """

    model_config = ConfigDict(extra="forbid")

    algebras: List[AlgebraLiteral] = []
    projections: Dict[str, Rational] = {}
    word: List[Union[str, LetterLiteral]]

    @model_validator(mode="after")
    def letters_resolve(self):
        names = set(self.projections)
        ids = {a.id for a in self.algebras}
        for letter in self.word:
            if isinstance(letter, str) and letter not in names:
                raise ValueError(f"letter {letter!r} names no projection")
            if isinstance(letter, LetterLiteral) and letter.algebra not in ids:
                raise ValueError(f"letter refers to unknown algebra {letter.algebra}")
        return self

    def build(self) -> Tuple[FreeWord, List[FiniteAbelianAlgebra]]:
        field = exact_field()
        algebras = {a.id: FiniteAbelianAlgebra(id=a.id, atom_weights=tuple(a.weights)) for a in self.algebras}

        named = {}
        next_id = max(algebras, default=0) + 1
        for name, trace in self.projections.items():
            if trace in (0, 1):
                alg = FiniteAbelianAlgebra(id=next_id, atom_weights=(1,))
                support = [0] if trace == 1 else []
            else:
                alg = FiniteAbelianAlgebra(id=next_id, atom_weights=(trace, 1 - trace))
                support = [0]
            algebras[next_id] = alg
            named[name] = alg.projection(support)
            next_id += 1

        letters = []
        for letter in self.word:
            if isinstance(letter, str):
                letters.append(named[letter])
                continue
            values = [
                field.complex(v.re, v.im) if isinstance(v, ComplexLiteral) else field.rational(v)
                for v in letter.values
            ]
            letters.append(algebras[letter.algebra].element(values))
        return FreeWord(tuple(letters)), list(algebras.values())

