"""
Random-matrix building blocks: Haar unitaries, free-in-the-limit projection
pairs, sign unitaries and the intertwiner between two reassemblies.
"""
from __future__ import annotations

import logging
from typing import Any, Callable, Sequence

import numpy as np
from scipy.linalg import qr

from app.core.config import settings
from app.core.errors import DomainError, NearSingularError, PartitionError
from app.utils.exact_field import as_fraction
from app.utils.functional_calculus import adjoint, frobenius, hermitize, matrix_sign, unitary_eigen

logger = logging.getLogger(__name__)


# -------------------------------------------------
# Sampling
# -------------------------------------------------
def sample_haar_unitary(N: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with the phases of R divided out."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    Z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2.0)
    Q, R = qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def sample_gue(N: int, rng: np.random.Generator) -> np.ndarray:
    """GUE normalized so the spectrum fills [-2, 2]."""
    G = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2.0)
    return (G + G.conj().T) / np.sqrt(2.0 * N)


def projection_rank(alpha: Any, N: int) -> int:
    k = as_fraction(alpha) * N
    if k.denominator != 1:
        raise DomainError(f"alpha * N = {k} is not an integer")
    if not 0 <= k <= N:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return int(k)


def sample_projection_pair(alpha: Any, N: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """P1 diagonal of rank alpha N; P2 a Haar rotation of an independent diagonal projection."""
    k = projection_rank(alpha, N)
    d1 = np.zeros(N)
    d1[:k] = 1.0
    d2 = np.zeros(N)
    d2[rng.permutation(N)[:k]] = 1.0
    U = sample_haar_unitary(N, rng)
    P1 = np.diag(d1).astype(complex)
    P2 = hermitize((U * d2[None, :]) @ U.conj().T)
    return P1, P2


def resample(build: Callable[[int], Any], label: str):
    """Call ``build(attempt)`` until it stops raising NearSingularError."""
    for attempt in range(settings.max_resamples + 1):
        try:
            return build(attempt)
        except NearSingularError as exc:
            logger.debug("%s: near-singular on attempt %d (%s), resampling", label, attempt, exc)
    raise NearSingularError(f"{label}: still near-singular after {settings.max_resamples} resamples")


# -------------------------------------------------
# Sign unitaries
# -------------------------------------------------
def polar_sign_unitary(X: np.ndarray, floor: float | None = None) -> np.ndarray:
    """u = sign(X) = X |X|^-1 for self-adjoint X."""
    X = np.asarray(X)
    scale = max(1.0, frobenius(X))
    if frobenius(X - adjoint(X)) > 1e-8 * scale:
        raise DomainError("polar_sign_unitary needs a self-adjoint matrix")
    return matrix_sign(X, settings.singularity_floor if floor is None else floor)


def complement_intertwiner(P1: np.ndarray, P2: np.ndarray, floor: float | None = None) -> np.ndarray:
    """
    Self-adjoint unitary u with u P1 u = P2 for projections of equal trace.
    Above trace 1/2 it is built from the complements.
    """
    N = P1.shape[0]
    t1, t2 = np.trace(P1).real / N, np.trace(P2).real / N
    if abs(t1 - t2) > 1e-8:
        raise DomainError(f"projections have different traces {t1:.6f} and {t2:.6f}")
    eye = np.eye(N)
    if t1 > 0.5:
        return polar_sign_unitary((eye - P1) + (eye - P2) - eye, floor)
    return polar_sign_unitary(P1 + P2 - eye, floor)


def anticommutator_defect(P1: np.ndarray, P2: np.ndarray) -> dict[str, float]:
    """
    With x = P1 + P2 - 1 and y = P1 - P2, xy + yx = 0, and so sign(x) y + y sign(x) = 0.
    Returns both Frobenius defects.
    """
    eye = np.eye(P1.shape[0])
    x = P1 + P2 - eye
    y = P1 - P2
    u = polar_sign_unitary(x)
    return {"x": frobenius(x @ y + y @ x), "sign": frobenius(u @ y + y @ u)}


# -------------------------------------------------
# Intertwiners
# -------------------------------------------------
def partition_defect(ps: Sequence[np.ndarray], us: Sequence[np.ndarray]) -> float:
    N = ps[0].shape[0]
    total = sum(u @ p @ adjoint(u) for p, u in zip(ps, us))
    return frobenius(total - np.eye(N))


def build_intertwiner(
    ps: Sequence[np.ndarray], us: Sequence[np.ndarray], vs: Sequence[np.ndarray], tol: float | None = None
) -> np.ndarray:
    """
    w = sum_i v_i p_i u_i*, the unitary carrying sum u_i A_i p_i u_i* onto
    sum v_i A_i p_i v_i*.
    """
    if not (len(ps) == len(us) == len(vs)) or not ps:
        raise DomainError("need equally many projections, u's and v's")
    tol = settings.partition_tol if tol is None else tol
    for name, fam in (("u", us), ("v", vs)):
        defect = partition_defect(ps, fam)
        if defect > tol:
            raise PartitionError(f"sum {name}_i p_i {name}_i* misses the identity by {defect:.3g}")

    w = sum(v @ p @ adjoint(u) for p, u, v in zip(ps, us, vs))
    defect = frobenius(w @ adjoint(w) - np.eye(w.shape[0]))
    if defect > tol:
        raise PartitionError(f"intertwiner is not unitary (defect {defect:.3g})")
    return w


def conjugation_defect(
    w: np.ndarray,
    ps: Sequence[np.ndarray],
    us: Sequence[np.ndarray],
    vs: Sequence[np.ndarray],
    elements: Sequence[Sequence[np.ndarray]],
) -> float:
    """max over elements a in A_i of |w u_i a p_i u_i* w* - v_i a p_i v_i*|."""
    worst = 0.0
    for p, u, v, family in zip(ps, us, vs, elements):
        for a in family:
            lhs = w @ u @ a @ p @ adjoint(u) @ adjoint(w)
            rhs = v @ a @ p @ adjoint(v)
            worst = max(worst, frobenius(lhs - rhs))
    return worst


# -------------------------------------------------
# Diagnostics
# -------------------------------------------------
def kernel_fraction(X: np.ndarray, floor: float = 1e-8) -> float:
    """Fraction of eigenvalues of a self-adjoint matrix with modulus below ``floor``."""
    lam = np.linalg.eigvalsh(hermitize(X))
    return float(np.count_nonzero(np.abs(lam) < floor)) / lam.size


def haar_moments(U: np.ndarray, k_max: int) -> list[complex]:
    """tau(U^k) for k = 1..k_max; all tend to 0 for a Haar unitary."""
    lam, _ = unitary_eigen(U)
    return [complex(np.mean(lam**k)) for k in range(1, k_max + 1)]


def orthogonality_defect(
    U: np.ndarray,
    g: Callable[[np.ndarray], np.ndarray],
    rng: np.random.Generator,
    samples: int = 6,
    degree: int = 2,
) -> float:
    """
    max |tau(g(U) f(U + U*))| / |f(U + U*)|_2 over f = 1 and random polynomials
    f of the given degree. For g(U) orthogonal to the functions of U + U* this
    is O(1/N).
    """
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples}")
    lam, _ = unitary_eigen(U)
    w = g(lam)
    x = 2.0 * lam.real
    worst = abs(complex(np.mean(w)))
    for _ in range(samples - 1):
        f = np.polynomial.polynomial.polyval(x, rng.standard_normal(degree + 1))
        norm = float(np.sqrt(np.mean(f**2)))
        if norm > 0.0:
            worst = max(worst, abs(complex(np.mean(w * f))) / norm)
    return float(worst)


def odd_sign(lam: np.ndarray) -> np.ndarray:
    """sign(sin theta) on eigenvalues e^{i theta}, refusing eigenvalues too close to +-1."""
    smallest = float(np.min(np.abs(lam.imag)))
    if smallest < settings.singularity_floor:
        raise NearSingularError(f"eigenvalue within {smallest:.3g} of the real axis", min_abs_imag=smallest)
    return np.sign(lam.imag)


def even_sign(cutoff: float) -> Callable[[np.ndarray], np.ndarray]:
    """+1 where |theta| < cutoff, -1 elsewhere; a function of U + U*."""
    threshold = np.cos(cutoff)

    def g(lam: np.ndarray) -> np.ndarray:
        return np.where(lam.real > threshold, 1.0, -1.0)

    return g