from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping

from app.core.errors import DomainError
from app.utils.exact_field import ExactField, ExactScalar, as_fraction, exact_field


# -------------------------------------------------
# Finite abelian algebras C^k with a faithful trace
# -------------------------------------------------
@dataclass(frozen=True)
class FiniteAbelianAlgebra:
    id: int
    atom_weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.atom_weights)
        if not weights:
            raise DomainError(f"algebra {self.id} has no atoms")
        if any(w <= 0 or w > 1 for w in weights):
            raise DomainError(f"algebra {self.id}: atom weights must lie in (0, 1]")
        if sum(weights) != 1:
            raise DomainError(f"algebra {self.id}: atom weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "atom_weights", weights)

    @property
    def size(self) -> int:
        return len(self.atom_weights)

    def element(self, values: Iterable[Any], field: ExactField | None = None) -> AlgebraElement:
        values = list(values)
        if field is None:
            field = exact_field()
            for v in values:
                if isinstance(v, ExactScalar):
                    field = field.join(v.field)
        return AlgebraElement(self, tuple(field.coerce(v) for v in values))

    def unit(self, field: ExactField | None = None) -> AlgebraElement:
        return self.element([1] * self.size, field)

    def zero(self, field: ExactField | None = None) -> AlgebraElement:
        return self.element([0] * self.size, field)

    def projection(self, support: Iterable[int], field: ExactField | None = None) -> AlgebraElement:
        support = set(support)
        if not support <= set(range(self.size)):
            raise DomainError(f"support {sorted(support)} outside atoms of algebra {self.id}")
        return self.element([1 if k in support else 0 for k in range(self.size)], field)


@dataclass(frozen=True)
class AlgebraElement:
    """A function on the atoms of one algebra; products are pointwise."""

    algebra: FiniteAbelianAlgebra
    values: tuple[ExactScalar, ...]

    def __post_init__(self):
        if len(self.values) != self.algebra.size:
            raise DomainError(
                f"algebra {self.algebra.id} has {self.algebra.size} atoms, got {len(self.values)} values"
            )

    @property
    def algebra_id(self) -> int:
        return self.algebra.id

    @property
    def field(self) -> ExactField:
        field = self.values[0].field
        for v in self.values[1:]:
            field = field.join(v.field)
        return field

    def _check_same(self, other: AlgebraElement):
        if not isinstance(other, AlgebraElement) or other.algebra != self.algebra:
            raise DomainError("elements belong to different algebras")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_same(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_same(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            self._check_same(other)
            return AlgebraElement(self.algebra, tuple(a * b for a, b in zip(self.values, other.values)))
        return AlgebraElement(self.algebra, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def shift(self, c) -> AlgebraElement:
        """self - c * 1"""
        return AlgebraElement(self.algebra, tuple(a - c for a in self.values))

    def trace(self) -> ExactScalar:
        total = self.field.zero
        for w, v in zip(self.algebra.atom_weights, self.values):
            total = total + v * w
        return total

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, tuple(v.conjugate() for v in self.values))

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.values)


# -------------------------------------------------
# Words in the free product
# -------------------------------------------------
@dataclass(frozen=True)
class FreeWord:
    letters: tuple[AlgebraElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[AlgebraElement]:
        return iter(self.letters)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def adjoint(self) -> FreeWord:
        return FreeWord(tuple(a.adjoint() for a in reversed(self.letters)))

    def rotate(self, k: int) -> FreeWord:
        if not self.letters:
            return self
        k %= len(self.letters)
        return FreeWord(self.letters[k:] + self.letters[:k])

    @property
    def algebra_ids(self) -> tuple[int, ...]:
        return tuple(a.algebra_id for a in self.letters)


@dataclass(frozen=True)
class SBasisWord:
    """Alternating word v_{i1} v_{i2} ... in the two centered generators at weight alpha."""

    indices: tuple[int, ...]
    alpha: Fraction

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        alpha = as_fraction(self.alpha)
        if not 0 < alpha <= Fraction(1, 2):
            raise DomainError(f"alpha must lie in (0, 1/2], got {alpha}")
        if any(i not in (1, 2) for i in indices):
            raise DomainError(f"indices must be 1 or 2, got {indices}")
        if any(a == b for a, b in zip(indices, indices[1:])):
            raise DomainError(f"indices must alternate, got {indices}")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "alpha", alpha)

    def __len__(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return "".join(f"v{i}" for i in self.indices) or "1"


# -------------------------------------------------
# Finite linear combinations over exact scalars
# -------------------------------------------------
class LinearCombination(Mapping):
    """Immutable key -> coefficient map that drops zero coefficients."""

    def __init__(self, terms: Mapping | Iterable[tuple[Any, ExactScalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        data: dict = {}
        for key, coef in items:
            data[key] = data[key] + coef if key in data else coef
        self._data = {k: c for k, c in data.items() if not _is_zero(c)}

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def coefficient(self, key, default=0):
        return self._data.get(key, default)

    def __add__(self, other: LinearCombination) -> LinearCombination:
        return LinearCombination(list(self._data.items()) + list(other.items()))

    def __sub__(self, other: LinearCombination) -> LinearCombination:
        return self + other.scale(-1)

    def scale(self, c) -> LinearCombination:
        return LinearCombination((k, v * c) for k, v in self._data.items())

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return (self - other)._data == {}

    def __repr__(self):
        body = " + ".join(f"({c})*{k}" for k, c in self._data.items())
        return f"LinearCombination({body or '0'})"


def _is_zero(c) -> bool:
    if isinstance(c, ExactScalar):
        return c.is_zero
    return c == 0
