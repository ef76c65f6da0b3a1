from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Literal, Mapping

import numpy as np

from app.core.config import settings
from app.core.errors import DomainError
from app.utils.exact_field import as_fraction

Tag = Literal["unitary", "projection", "selfadjoint", "general"]


# -------------------------------------------------
# Matrix scenes
# -------------------------------------------------
@dataclass(frozen=True, eq=False)
class MatrixScene:
    """
    Named N x N matrices built from one seed. Matrices are read-only after
    construction, and every tagged matrix is checked against its tag.
    """

    N: int
    seed: int
    matrices: Mapping[str, np.ndarray]
    tags: Mapping[str, Tag]

    def __post_init__(self):
        frozen = {}
        for name, m in self.matrices.items():
            arr = np.array(m, dtype=complex)
            if arr.shape != (self.N, self.N):
                raise DomainError(f"matrix {name} has shape {arr.shape}, expected ({self.N}, {self.N})")
            arr.setflags(write=False)
            frozen[name] = arr
        tags = dict(self.tags)
        missing = set(tags) - set(frozen)
        if missing:
            raise DomainError(f"tags for unknown matrices {sorted(missing)}")
        object.__setattr__(self, "matrices", MappingProxyType(frozen))
        object.__setattr__(self, "tags", MappingProxyType(tags))

        defects = self.invariant_defects()
        bad = {k: v for k, v in defects.items() if v > _tolerance(self.tags[k])}
        if bad:
            raise DomainError(f"scene matrices violate their tags: {bad}")

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.matrices[name]
        except KeyError:
            raise DomainError(f"scene has no matrix {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.matrices

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.N, dtype=complex)

    def trace(self, name_or_matrix) -> complex:
        m = self[name_or_matrix] if isinstance(name_or_matrix, str) else name_or_matrix
        return complex(np.trace(m)) / self.N

    def invariant_defects(self) -> dict[str, float]:
        """Frobenius-norm defect of every tagged matrix."""
        out = {}
        eye = np.eye(self.N)
        for name, tag in self.tags.items():
            m = self.matrices[name]
            if tag == "unitary":
                out[name] = float(np.linalg.norm(m @ m.conj().T - eye))
            elif tag == "projection":
                out[name] = max(float(np.linalg.norm(m @ m - m)), float(np.linalg.norm(m - m.conj().T)))
            elif tag == "selfadjoint":
                out[name] = float(np.linalg.norm(m - m.conj().T))
        return out


def _tolerance(tag: Tag) -> float:
    if tag == "unitary":
        return settings.unitary_tol
    if tag == "projection":
        return settings.projection_tol
    if tag == "selfadjoint":
        return settings.projection_tol
    return float("inf")


# -------------------------------------------------
# Recipes
# -------------------------------------------------
@dataclass(frozen=True)
class ReassemblySpec:
    n: int
    traces: tuple[Fraction, ...]
    unitary_mode: Literal["haar", "structured"] = "haar"

    def __post_init__(self):
        traces = tuple(as_fraction(t) for t in self.traces)
        if self.n < 2:
            raise DomainError(f"need at least two factors, got n={self.n}")
        if len(traces) != self.n:
            raise DomainError(f"{self.n} factors but {len(traces)} traces")
        if any(t < 0 or t > 1 for t in traces):
            raise DomainError("traces must lie in [0, 1]")
        if sum(traces) != 1:
            raise DomainError(f"traces sum to {sum(traces)}, not 1")
        if self.unitary_mode not in ("haar", "structured"):
            raise DomainError(f"unknown unitary_mode {self.unitary_mode!r}")
        object.__setattr__(self, "traces", traces)

    @classmethod
    def default(cls, n: int, unitary_mode: str = "haar") -> ReassemblySpec:
        if n == 2:
            traces = (Fraction(1, 2), Fraction(1, 2))
        elif n == 3:
            traces = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        else:
            traces = (Fraction(1, n),) * n
        return cls(n=n, traces=traces, unitary_mode=unitary_mode)

    def ranks(self, N: int) -> tuple[int, ...]:
        ranks = []
        for t in self.traces:
            r = t * N
            if r.denominator != 1:
                raise DomainError(f"trace {t} times N = {N} is not an integer")
            ranks.append(int(r))
        return tuple(ranks)


@dataclass(frozen=True)
class SlotRecipe:
    """How one slot of a pattern is filled: a fresh random draw or a named scene matrix."""

    kind: Literal["random", "specific"] = "random"
    matrix: str | None = None
    trace: complex | None = None

    def __post_init__(self):
        if self.kind == "specific" and not self.matrix:
            raise DomainError("a specific slot needs a matrix name")


@dataclass(frozen=True)
class WordPattern:
    tags: tuple[int, ...]
    slots: tuple[SlotRecipe, ...] | None = None

    def __post_init__(self):
        tags = tuple(int(t) for t in self.tags)
        if not tags:
            raise DomainError("empty pattern")
        if any(t < 1 for t in tags):
            raise DomainError("pattern tags are 1-based")
        if any(a == b for a, b in zip(tags, tags[1:])):
            raise DomainError(f"adjacent tags must differ, got {tags}")
        if self.slots is not None and len(self.slots) != len(tags):
            raise DomainError("one slot recipe per tag")
        object.__setattr__(self, "tags", tags)

    @property
    def label(self) -> str:
        return "-".join(str(t) for t in self.tags)

    def slot(self, k: int) -> SlotRecipe:
        return self.slots[k] if self.slots is not None else _RANDOM

    def __len__(self) -> int:
        return len(self.tags)


_RANDOM = SlotRecipe()


@dataclass(frozen=True)
class ElementSampler:
    """A named random-element source for one algebra."""

    name: str
    draw: Callable[[np.random.Generator], np.ndarray] = field(repr=False)

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return self.draw(rng)
