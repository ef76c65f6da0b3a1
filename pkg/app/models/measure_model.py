from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

import numpy as np
from scipy.integrate import trapezoid

from app.core.errors import DomainError
from app.utils.exact_field import as_fraction


# -------------------------------------------------
# Finitely atomic probability measures on R
# -------------------------------------------------
@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple[tuple[float, Fraction], ...]

    def __post_init__(self):
        atoms = sorted((float(x), as_fraction(m)) for x, m in self.atoms)
        if not atoms:
            raise DomainError("measure has no atoms")
        locations = [x for x, _ in atoms]
        if any(not math.isfinite(x) for x in locations):
            raise DomainError("atom locations must be finite")
        if len(set(locations)) != len(locations):
            raise DomainError(f"atom locations must be distinct, got {locations}")
        if any(m <= 0 or m > 1 for _, m in atoms):
            raise DomainError("atom masses must lie in (0, 1]")
        if sum(m for _, m in atoms) != 1:
            raise DomainError(f"atom masses sum to {sum(m for _, m in atoms)}, not 1")
        object.__setattr__(self, "atoms", tuple(atoms))

    @classmethod
    def bernoulli(cls, alpha: Any) -> AtomicMeasure:
        """(1 - alpha) delta_0 + alpha delta_1"""
        alpha = as_fraction(alpha)
        if not 0 <= alpha <= 1:
            raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
        atoms = [(0.0, 1 - alpha), (1.0, alpha)]
        return cls(tuple((x, m) for x, m in atoms if m > 0))

    @classmethod
    def dirac(cls, x: float) -> AtomicMeasure:
        return cls(((x, Fraction(1)),))

    @property
    def locations(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.atoms)

    @property
    def masses(self) -> tuple[float, ...]:
        return tuple(float(m) for _, m in self.atoms)

    def moment(self, k: int) -> float:
        return math.fsum(float(m) * x**k for x, m in self.atoms)

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def support(self) -> tuple[float, float]:
        return self.atoms[0][0], self.atoms[-1][0]


# -------------------------------------------------
# Cauchy transforms as callables with provenance
# -------------------------------------------------
@dataclass(frozen=True)
class CauchyEvaluator:
    """
    G(z) = integral of 1/(z - x) dmu(x), defined on Im z > 0.

    ``fn`` is vectorized over numpy arrays. ``candidate_atoms`` lists the
    points where the measure may carry mass, ``support`` bounds it.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    tag: str
    support: tuple[float, float]
    mean: float
    candidate_atoms: tuple[float, ...] = ()
    source: AtomicMeasure | None = None

    def values(self, z: Iterable[complex] | np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag <= 0):
            raise DomainError(f"{self.tag}: Cauchy transform evaluated off the upper half-plane")
        return np.asarray(self.fn(z), dtype=complex)

    def __call__(self, z: complex) -> complex:
        return complex(self.values(np.array([z]))[0])

    @property
    def support_radius(self) -> float:
        return max(abs(self.support[0]), abs(self.support[1]))


@dataclass(frozen=True)
class SpectralSample:
    grid: np.ndarray
    density: np.ndarray
    atoms: tuple[tuple[float, float], ...] = field(default=())

    @property
    def continuous_mass(self) -> float:
        return float(trapezoid(self.density, self.grid))

    @property
    def atomic_mass(self) -> float:
        return math.fsum(m for _, m in self.atoms)

    @property
    def total_mass(self) -> float:
        return self.continuous_mass + self.atomic_mass
