from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True, eq=False)
class TwoProjectionModel:
    """
    Quadrature model of the von Neumann algebra of two free projections of
    trace alpha: a direct integral of 2x2 blocks at angles t in (0, pi/2)
    plus a one-dimensional block where p = q = 0.

    ``angles`` and ``weights`` describe the continuous part; ``atom_part``
    lists the remaining atoms as ``(label, mass)``.
    """

    alpha: Fraction
    angles: np.ndarray
    weights: np.ndarray
    atom_part: tuple[tuple[str, float], ...]

    def __post_init__(self):
        for name in ("angles", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def node_count(self) -> int:
        return int(self.angles.size)

    @property
    def total_weight(self) -> float:
        return math.fsum(self.weights) + math.fsum(m for _, m in self.atom_part)

    # ---------- node realizations ----------

    def node_p(self) -> np.ndarray:
        p = np.zeros((self.node_count, 2, 2))
        p[:, 0, 0] = 1.0
        return p

    def node_q(self) -> np.ndarray:
        c, s = np.cos(self.angles), np.sin(self.angles)
        q = np.empty((self.node_count, 2, 2))
        q[:, 0, 0] = c * c
        q[:, 0, 1] = q[:, 1, 0] = c * s
        q[:, 1, 1] = s * s
        return q

    def node_u(self) -> np.ndarray:
        """sign(p + q - 1) on each block: p + q - 1 = cos t [[cos t, sin t], [sin t, -cos t]]."""
        c, s = np.cos(self.angles), np.sin(self.angles)
        u = np.empty((self.node_count, 2, 2))
        u[:, 0, 0] = c
        u[:, 0, 1] = u[:, 1, 0] = s
        u[:, 1, 1] = -c
        return u
