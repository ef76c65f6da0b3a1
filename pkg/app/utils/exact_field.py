"""
Exact scalars for the free-product engine.

Values live in Q(i, sqrt(d1), sqrt(d2), ...) realized with sympy's algebraic
number fields. Rationals enter as :class:`fractions.Fraction`; every field is
cached and identified by its set of square-free radicands, so two scalars
over the same radicands share one domain object.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any

import sympy
from sympy import QQ, I, Rational, sqrt

from app.core.errors import DomainError


def as_fraction(x: Any) -> Fraction:
    """Always return an exact Fraction (floats go through their decimal repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    raise DomainError(f"not a rational: {x!r}")


def squarefree_radicand(d: Fraction) -> int | None:
    """sqrt(d) = c * sqrt(k) with c rational and k square-free; returns k (None when k = 1)."""
    d = as_fraction(d)
    if d < 0:
        raise DomainError(f"negative radicand {d}")
    if d == 0:
        return None
    root = sqrt(Rational(d.numerator, d.denominator))
    _, radical = root.as_coeff_Mul()
    if radical == 1:
        return None
    return int(radical**2)


class ExactField:
    def __init__(self, radicands: frozenset[int]):
        self.radicands = radicands
        gens = [I] + [sqrt(k) for k in sorted(radicands)]
        self.domain = QQ.algebraic_field(*gens)
        self.zero = ExactScalar(self, self.domain.zero)
        self.one = ExactScalar(self, self.domain.one)
        self.i = ExactScalar(self, self.domain.from_sympy(I))

    def __repr__(self) -> str:
        return f"ExactField({sorted(self.radicands)})"

    def rational(self, q: Any) -> ExactScalar:
        q = as_fraction(q)
        return ExactScalar(self, self.domain.from_sympy(Rational(q.numerator, q.denominator)))

    def complex(self, re: Any, im: Any = 0) -> ExactScalar:
        value = self.rational(re)
        im = as_fraction(im)
        if im:
            value = value + self.i * self.rational(im)
        return value

    def sqrt(self, d: Any) -> ExactScalar:
        d = as_fraction(d)
        k = squarefree_radicand(d)
        if k is not None and k not in self.radicands:
            raise DomainError(f"sqrt({d}) is not in {self!r}")
        return ExactScalar(self, self.domain.from_sympy(sqrt(Rational(d.numerator, d.denominator))))

    def from_sympy(self, expr) -> ExactScalar:
        return ExactScalar(self, self.domain.from_sympy(expr))

    def coerce(self, value: Any) -> ExactScalar:
        if isinstance(value, ExactScalar):
            if value.field is self:
                return value
            if not value.field.radicands <= self.radicands:
                raise DomainError(f"{value!r} does not embed into {self!r}")
            return self.from_sympy(value.to_sympy())
        if isinstance(value, complex):
            return self.complex(value.real, value.imag)
        return self.rational(value)

    def join(self, other: ExactField) -> ExactField:
        if other is self or other.radicands <= self.radicands:
            return self
        return exact_field(self.radicands | other.radicands)


@lru_cache(maxsize=None)
def _field(radicands: frozenset[int]) -> ExactField:
    return ExactField(radicands)


def exact_field(radicands=frozenset()) -> ExactField:
    return _field(frozenset(radicands))


def field_for_sqrt(d: Any) -> ExactField:
    """The smallest cached field containing sqrt(d)."""
    k = squarefree_radicand(as_fraction(d))
    return exact_field(() if k is None else (k,))


class ExactScalar:
    """An element of an :class:`ExactField`; arithmetic promotes to the joined field."""

    __slots__ = ("field", "rep", "_hash")

    def __init__(self, field: ExactField, rep):
        self.field = field
        self.rep = rep
        self._hash = None

    # ---------- coercion ----------

    def _pair(self, other: Any):
        if isinstance(other, ExactScalar):
            field = self.field.join(other.field)
            return field, field.coerce(self).rep, field.coerce(other).rep
        if isinstance(other, (int, Fraction, complex)) and not isinstance(other, bool):
            return self.field, self.rep, self.field.coerce(other).rep
        return None

    # ---------- arithmetic ----------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        return ExactScalar(field, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        return ExactScalar(field, a - b)

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        return ExactScalar(field, b - a)

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        return ExactScalar(field, a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        if not b:
            raise ZeroDivisionError("exact division by zero")
        return ExactScalar(field, field.domain.quo(a, b))

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        field, a, b = pair
        if not a:
            raise ZeroDivisionError("exact division by zero")
        return ExactScalar(field, field.domain.quo(b, a))

    def __neg__(self):
        return ExactScalar(self.field, -self.rep)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.field.one
        for _ in range(k):
            out = out * self
        return out

    # ---------- comparison ----------

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        _, a, b = pair
        return a == b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(sympy.expand(self.to_sympy()))
        return self._hash

    def __bool__(self):
        return bool(self.rep)

    @property
    def is_zero(self) -> bool:
        return not self.rep

    def key(self) -> tuple:
        """Hashable encoding, only comparable between scalars of one field."""
        return tuple(self.rep.to_list())

    # ---------- conversion ----------

    def to_sympy(self):
        return sympy.expand(self.field.domain.to_sympy(self.rep))

    def conjugate(self) -> ExactScalar:
        return self.field.from_sympy(sympy.expand(sympy.conjugate(self.to_sympy())))

    def as_fraction(self) -> Fraction:
        expr = self.to_sympy()
        if not expr.is_Rational:
            raise DomainError(f"{expr} is not rational")
        return Fraction(int(expr.p), int(expr.q))

    def __complex__(self):
        return complex(sympy.N(self.to_sympy(), 30))

    def __float__(self):
        value = complex(self)
        if abs(value.imag) > 1e-12 * max(1.0, abs(value)):
            raise TypeError(f"{self!r} is not real")
        return value.real

    def __str__(self):
        return str(self.to_sympy())

    def __repr__(self):
        return f"ExactScalar({self.to_sympy()})"
