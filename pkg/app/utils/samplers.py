"""Random elements of the commutative algebras the freeness tests draw from."""
from __future__ import annotations

import numpy as np

from app.models.scene_model import ElementSampler
from app.utils.functional_calculus import adjoint, hermitize


def _poly(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(x, coef)


def spectral_polynomial_sampler(name: str, H: np.ndarray, degree: int = 3) -> ElementSampler:
    """Random real polynomials of degree <= ``degree`` in the self-adjoint matrix H."""
    lam, V = np.linalg.eigh(hermitize(H))
    Vh = adjoint(V)

    def draw(rng: np.random.Generator) -> np.ndarray:
        coef = rng.standard_normal(degree + 1)
        return (V * _poly(coef, lam)[None, :]) @ Vh

    return ElementSampler(name, draw)


def laurent_sampler(name: str, V: np.ndarray, degree: int = 3) -> ElementSampler:
    """Self-adjoint combinations of V^k + V^-k and i (V^k - V^-k), 1 <= k <= degree."""
    powers = [V]
    for _ in range(degree - 1):
        powers.append(powers[-1] @ V)
    cos_terms = [P + adjoint(P) for P in powers]
    sin_terms = [1j * (P - adjoint(P)) for P in powers]

    def draw(rng: np.random.Generator) -> np.ndarray:
        a = rng.standard_normal(degree)
        b = rng.standard_normal(degree)
        return sum(a[k] * cos_terms[k] + b[k] * sin_terms[k] for k in range(degree))

    return ElementSampler(name, draw)


def rotated_diagonal_sampler(
    name: str, spectrum: np.ndarray, rotation: np.ndarray | None = None, degree: int = 2
) -> ElementSampler:
    """R diag(f(spectrum)) R* for random polynomials f; R = identity when omitted."""
    Rh = None if rotation is None else adjoint(rotation)

    def draw(rng: np.random.Generator) -> np.ndarray:
        values = _poly(rng.standard_normal(degree + 1), spectrum)
        if rotation is None:
            return np.diag(values).astype(complex)
        return (rotation * values[None, :]) @ Rh

    return ElementSampler(name, draw)
