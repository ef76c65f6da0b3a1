"""
Functions of normal matrices through their eigendecompositions.

All helpers accept a single matrix or a stack of matrices with shape
(..., N, N), following numpy.linalg conventions.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.linalg import schur

from app.core.errors import NearSingularError


def adjoint(X: np.ndarray) -> np.ndarray:
    return np.swapaxes(X, -1, -2).conj()


def hermitize(X: np.ndarray) -> np.ndarray:
    return (X + adjoint(X)) / 2


def matrix_sign(H: np.ndarray, floor: float) -> np.ndarray:
    """
    sign(H) for Hermitian H. Raises NearSingularError when some eigenvalue
    has modulus below ``floor``.
    """
    lam, V = np.linalg.eigh(hermitize(H))
    smallest = float(np.min(np.abs(lam)))
    if smallest < floor:
        raise NearSingularError(
            f"smallest |eigenvalue| {smallest:.3g} is below the floor {floor:g}",
            min_abs_eigenvalue=smallest,
        )
    return (V * np.sign(lam)[..., None, :]) @ adjoint(V)


def unitary_eigen(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and a unitary eigenbasis of a unitary matrix (complex Schur form)."""
    T, Z = schur(U, output="complex")
    return np.diag(T).copy(), Z


def unitary_apply(U: np.ndarray, g: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """g(U) for unitary U, with g acting on the eigenvalues."""
    lam, Z = unitary_eigen(U)
    return (Z * g(lam)[None, :]) @ Z.conj().T


def normalized_trace(X: np.ndarray) -> complex:
    return complex(np.trace(X)) / X.shape[-1]


def trace_of_product(A: np.ndarray, B: np.ndarray) -> complex:
    """tr(A B) / N without forming the product."""
    return complex(np.sum(A * B.T)) / A.shape[-1]


def frobenius(X: np.ndarray) -> float:
    return float(np.linalg.norm(X, ord="fro"))


def l2_norm(X: np.ndarray) -> float:
    """sqrt(tr(X* X) / N)"""
    return frobenius(X) / np.sqrt(X.shape[-1])
