"""
Traces of words in p, q and the sign unitary u = sign(p + q - 1) for two
free projections, computed on a calibrated quadrature model.

On the 2x2 block at angle t, p projects onto e1 and q onto (cos t, sin t);
u swaps them (u p u = q). The law of the angle is read off the Cauchy
transform of p + q, whose continuous part lives on (1 - r, 1 + r) with
r = 2 sqrt(alpha (1 - alpha)), and a block at angle t contributes the pair
of eigenvalues 1 +- cos t.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from app.core.config import settings
from app.core.errors import CalibrationError, DomainError, NearSingularError, WordTooLongError
from app.models.two_projection_model import TwoProjectionModel
from app.schemas.report_schemas import MomentEstimate
from app.utils.exact_field import as_fraction
from app.utils.measures import atom_mass, free_sum_evaluator, moments_from_cauchy, stieltjes_density

logger = logging.getLogger(__name__)

LETTERS = frozenset("pqu")

# values of p, q, u on the block where p = q = 0
_ZERO_BLOCK = {"p": 0.0, "q": 0.0, "u": -1.0}

_DENSITY_EPS = 1e-14
_CALIBRATION_MOMENTS = 6


@lru_cache(maxsize=32)
def _build(alpha: Fraction, node_count: int) -> TwoProjectionModel:
    a = float(alpha)
    r = 2.0 * math.sqrt(a * (1.0 - a))
    G = free_sum_evaluator(alpha)

    # x = 1 - r cos(theta) on (1 - r, 1), written to keep precision near the lower edge
    nodes, gl_weights = np.polynomial.legendre.leggauss(node_count)
    theta = (nodes + 1.0) * math.pi / 4.0
    theta_weights = gl_weights * math.pi / 4.0
    x = (1.0 - r) + 2.0 * r * np.sin(theta / 2.0) ** 2

    sample = stieltjes_density(G, x, _DENSITY_EPS, check_mass=False)
    # both halves of the symmetric density around 1 map onto one angle
    weights = 2.0 * sample.density * r * np.sin(theta) * theta_weights
    angles = np.arccos(r * np.cos(theta))

    zero_mass = 1.0 - 2.0 * a
    atom_part = (("zero", zero_mass),) if zero_mass > 0 else ()
    model = TwoProjectionModel(alpha=alpha, angles=angles, weights=weights, atom_part=atom_part)

    _calibrate(model, G)
    logger.info("two-projection model alpha=%s: %d nodes, atom mass %.6f", alpha, node_count, zero_mass)
    return model


def _calibrate(model: TwoProjectionModel, G) -> None:
    zero_mass = model.atom_part[0][1] if model.atom_part else 0.0
    recovered = atom_mass(G, 0.0)
    if abs(recovered - zero_mass) > 1e-3:
        raise CalibrationError(f"atom at 0: model {zero_mass:.6f}, transform {recovered:.6f}")
    if atom_mass(G, 1.0) > 1e-3:
        raise CalibrationError("p + q has an atom at 1")

    total = model.total_weight
    if abs(total - 1.0) > settings.weight_tol:
        raise CalibrationError(f"quadrature weights sum to {total:.12f}")

    reference = moments_from_cauchy(G, _CALIBRATION_MOMENTS)
    c = np.cos(model.angles)
    for k, ref in enumerate(reference, start=1):
        value = math.fsum(model.weights * ((1 + c) ** k + (1 - c) ** k) / 2.0)
        if abs(value - ref) > settings.calibration_tol:
            raise CalibrationError(f"moment {k} of p + q: model {value:.9f}, transform {ref:.9f}")


def build_two_projection_model(alpha: Any, node_count: int | None = None) -> TwoProjectionModel:
    alpha = as_fraction(alpha)
    if not 0 < alpha <= Fraction(1, 2):
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha}")
    node_count = settings.node_count if node_count is None else int(node_count)
    if node_count < 16:
        raise DomainError(f"node_count must be at least 16, got {node_count}")
    return _build(alpha, node_count)


# -------------------------------------------------
# Node matrices and words
# -------------------------------------------------
@lru_cache(maxsize=32)
def _node_matrices(model: TwoProjectionModel) -> dict[str, np.ndarray]:
    # p + q - 1 has eigenvalues +-cos t on the block at angle t
    smallest = float(np.min(np.abs(np.cos(model.angles))))
    if smallest < settings.singularity_floor:
        raise NearSingularError(
            f"node at cos t = {smallest:.3g} is below the floor", min_abs_eigenvalue=smallest
        )
    mats = {"p": model.node_p(), "q": model.node_q(), "u": model.node_u()}
    for m in mats.values():
        m.setflags(write=False)
    return mats


def node_matrices(model: TwoProjectionModel) -> dict[str, np.ndarray]:
    return _node_matrices(model)


def _check_word(word: str) -> str:
    if not isinstance(word, str) or not word:
        raise DomainError("word must be a non-empty string over {p, q, u}")
    bad = set(word) - LETTERS
    if bad:
        raise DomainError(f"unknown letters {sorted(bad)} in word {word!r}")
    if len(word) > settings.max_word_length:
        raise WordTooLongError(f"word {word!r} is longer than {settings.max_word_length} letters")
    return word


def sign_unitary_moment(model: TwoProjectionModel, word: str) -> float:
    """tau(word) for a word over {p, q, u}."""
    word = _check_word(word)
    mats = _node_matrices(model)
    prod = mats[word[0]]
    for letter in word[1:]:
        prod = prod @ mats[letter]
    node_values = np.trace(prod, axis1=1, axis2=2) / 2.0
    continuous = math.fsum(model.weights * node_values)
    atomic = math.fsum(m * math.prod(_ZERO_BLOCK[ch] for ch in word) for _, m in model.atom_part)
    return continuous + atomic


def moment_with_error(model: TwoProjectionModel, word: str) -> MomentEstimate:
    """The moment together with its change against a half-resolution model."""
    value = sign_unitary_moment(model, word)
    coarse = build_two_projection_model(model.alpha, max(16, model.node_count // 2))
    return MomentEstimate(word=word, value=value, est_error=abs(value - sign_unitary_moment(coarse, word)))


# -------------------------------------------------
# Block-level identities
# -------------------------------------------------
def node_identity_defects(model: TwoProjectionModel) -> dict[str, float]:
    """Largest violation over the nodes of each identity the sign unitary satisfies."""
    mats = _node_matrices(model)
    p, q, u = mats["p"], mats["q"], mats["u"]
    eye = np.eye(2)

    def worst(x):
        return float(np.max(np.abs(x)))

    return {
        "u_selfadjoint": worst(u - np.swapaxes(u, 1, 2)),
        "u_squared": worst(u @ u - eye),
        "u_p_u_equals_q": worst(u @ p @ u - q),
        "u_q_u_equals_p": worst(u @ q @ u - p),
    }


def anticommutator_defect(model: TwoProjectionModel) -> dict[str, float]:
    """
    With x = p + q - 1 and y = p - q on every node, x y + y x = 0 and so
    sign(x) y + y sign(x) = 0. Returns the largest entry of each.
    """
    mats = _node_matrices(model)
    x = mats["p"] + mats["q"] - np.eye(2)
    y = mats["p"] - mats["q"]
    u = mats["u"]
    return {"x": float(np.max(np.abs(x @ y + y @ x))), "sign": float(np.max(np.abs(u @ y + y @ u)))}


def swap_identity_defect(model: TwoProjectionModel) -> float:
    """u v_p u = v_q for the centered normalized generators, on every node."""
    a = float(model.alpha)
    s = math.sqrt(a - a * a)
    mats = _node_matrices(model)
    eye = np.eye(2)
    vp = (mats["p"] - a * eye) / s
    vq = (mats["q"] - a * eye) / s
    u = mats["u"]
    return float(np.max(np.abs(u @ vp @ u - vq)))
