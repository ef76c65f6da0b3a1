"""
Freeness checks for constructions built from independent Haar unitaries
and GUE matrices: the radial algebra against products of odd sign
unitaries, the weak freely-complemented property, and semicircular
families along perpendicular directions.
"""
from __future__ import annotations

import logging
import math
from typing import Literal, Sequence

import numpy as np

from app.core.errors import DomainError
from app.models.scene_model import MatrixScene
from app.schemas.report_schemas import FreenessReport, VerdictRule
from app.utils.freeness import alternating_patterns, freeness_test
from app.utils.functional_calculus import adjoint, hermitize, unitary_apply
from app.utils.rmt import even_sign, odd_sign, resample, sample_gue, sample_haar_unitary
from app.utils.samplers import laurent_sampler, spectral_polynomial_sampler
from app.utils.streams import StreamFactory

logger = logging.getLogger(__name__)

# angle cutoff of the even sign function standing in for w_1 in the control run
CONTROL_CUTOFF = 11 * math.pi / 12


def _require_even(N: int) -> None:
    if N < 2 or N % 2:
        raise DomainError(f"N must be even, got {N}")


def odd_sign_pair(label: str, index: int, N: int, streams: StreamFactory) -> tuple[np.ndarray, np.ndarray]:
    """A Haar unitary U and W = sign(sin theta)(U), resampling U when an eigenvalue sits near +-1."""

    def attempt(a: int):
        U = sample_haar_unitary(N, streams(f"{label}-{index}", a))
        return U, hermitize(unitary_apply(U, odd_sign))

    return resample(attempt, f"{label} {index}")


def radial_check(
    n: int,
    i: int,
    j: int,
    N: int,
    trials: int,
    *,
    streams: StreamFactory,
    max_length: int = 6,
    control: bool = False,
    rule: VerdictRule | None = None,
) -> FreenessReport:
    """
    r = sum_k (U_k + U_k*) against V = W_i W_j with W_k = sign(sin theta)(U_k).
    ``control`` tests the radial algebra against itself.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if i == j:
        raise DomainError("i and j must differ; V = W_i W_i is the identity")
    if not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"i and j must lie in 1..{n}")
    _require_even(N)

    matrices, tags = {}, {}
    r = np.zeros((N, N), dtype=complex)
    for k in range(1, n + 1):
        U, W = odd_sign_pair("radial-haar", k, N, streams)
        matrices[f"U{k}"], tags[f"U{k}"] = U, "unitary"
        matrices[f"W{k}"], tags[f"W{k}"] = W, "unitary"
        r += U + adjoint(U)
    r = hermitize(r) / math.sqrt(2 * n)
    V = matrices[f"W{i}"] @ matrices[f"W{j}"]
    matrices["R"], tags["R"] = r, "selfadjoint"
    matrices["V"], tags["V"] = V, "unitary"
    scene = MatrixScene(N=N, seed=streams.seed, matrices=matrices, tags=tags)

    radial = spectral_polynomial_sampler("radial", r)
    other = radial if control else laurent_sampler("V", V)
    label = "radial-control" if control else f"radial-{i}{j}"
    return freeness_test(
        scene,
        [radial, other],
        alternating_patterns(2, max_length),
        trials,
        streams=streams,
        rule=rule,
        label=label,
    )


def weak_fc_check(
    kind: Literal["product", "conjugated"],
    N: int,
    trials: int,
    *,
    streams: StreamFactory,
    max_length: int = 6,
    control: bool = False,
    rule: VerdictRule | None = None,
) -> FreenessReport:
    """
    {u}'' against B_1 * B_2, where B_k are the even functions of U_k and u is
    w_1 w_2 (product) or w_2 U_1 w_2 (conjugated). Tag 1 is {u}'', tags 2 and
    3 are B_1 and B_2; runs of B letters form alternating words in B_1 * B_2.

    The control (product kind only) replaces w_1 by an even sign function
    of U_1, which lies in B_1.
    """
    if kind not in ("product", "conjugated"):
        raise DomainError(f"unknown kind {kind!r}")
    if control and kind != "product":
        raise DomainError("the control run is defined for the product kind")
    _require_even(N)

    U1, W1 = odd_sign_pair("weakfc-haar", 1, N, streams)
    U2, W2 = odd_sign_pair("weakfc-haar", 2, N, streams)
    if control:
        W1 = hermitize(unitary_apply(U1, even_sign(CONTROL_CUTOFF)))

    if kind == "product":
        u = W1 @ W2
    else:
        u = W2 @ U1 @ W2

    h1 = hermitize(U1 + adjoint(U1)) / 2
    h2 = hermitize(U2 + adjoint(U2)) / 2
    scene = MatrixScene(
        N=N,
        seed=streams.seed,
        matrices={"U1": U1, "U2": U2, "W1": W1, "W2": W2, "u": u, "H1": h1, "H2": h2},
        tags={
            "U1": "unitary",
            "U2": "unitary",
            "W1": "unitary",
            "W2": "unitary",
            "u": "unitary",
            "H1": "selfadjoint",
            "H2": "selfadjoint",
        },
    )
    families = [
        laurent_sampler("u", u, degree=2),
        spectral_polynomial_sampler("B1", h1),
        spectral_polynomial_sampler("B2", h2),
    ]
    label = f"weak-fc-{kind}" + ("-control" if control else "")
    return freeness_test(
        scene,
        families,
        alternating_patterns(3, max_length, first_tag=1),
        trials,
        streams=streams,
        rule=rule,
        label=label,
    )


def semicircular_perp_check(
    t: Sequence[float],
    t_prime: Sequence[float],
    N: int,
    trials: int,
    *,
    streams: StreamFactory,
    max_length: int = 6,
    rule: VerdictRule | None = None,
) -> FreenessReport:
    """s(t) = sum_k t_k s_k / |t| against s(t') for independent GUE s_k."""
    t = np.asarray(t, dtype=float)
    tp = np.asarray(t_prime, dtype=float)
    if t.ndim != 1 or t.shape != tp.shape or t.size == 0:
        raise DomainError("t and t' must be vectors of the same length")
    nt, ntp = float(np.linalg.norm(t)), float(np.linalg.norm(tp))
    if nt == 0 or ntp == 0:
        raise DomainError("t and t' must be non-zero")
    if abs(float(t @ tp)) > 1e-12 * nt * ntp:
        raise DomainError("t and t' must be perpendicular")

    gue = [sample_gue(N, streams("gue", k)) for k in range(t.size)]
    s = hermitize(sum(c * g for c, g in zip(t, gue))) / nt
    sp = hermitize(sum(c * g for c, g in zip(tp, gue))) / ntp
    scene = MatrixScene(N=N, seed=streams.seed, matrices={"S": s, "S'": sp}, tags={"S": "selfadjoint", "S'": "selfadjoint"})
    return freeness_test(
        scene,
        [spectral_polynomial_sampler("s(t)", s), spectral_polynomial_sampler("s(t')", sp)],
        alternating_patterns(2, max_length),
        trials,
        streams=streams,
        rule=rule,
        label="semicircular",
    )
