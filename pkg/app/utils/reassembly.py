"""
Finite-dimensional models of free reassemblies.

Factor i is the diagonal algebra of functions of h_i = W_i diag(lambda) W_i*
with W_1 = 1 and W_i (i >= 2) independent Haar unitaries; lambda is an evenly
spaced grid on [-1, 1]. p_i is the spectral projection of h_i on its lowest
tau_i N eigenvalues, the q_i cut the diagonal of A_1 into consecutive blocks
of the same sizes, and u_i = sign(p_i + q_i - 1) carries p_i onto q_i.
The reassembled families are

    A'_1 = A_1 q_1 + sum_{i >= 2} u_i A_i p_i u_i
    A'_i = A_i (1 - p_i) + u_i A_1 q_i u_i        (i >= 2)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from app.core.config import settings
from app.core.errors import DomainError, PartitionError
from app.models.scene_model import ElementSampler, MatrixScene, ReassemblySpec
from app.utils.functional_calculus import adjoint, frobenius, hermitize
from app.utils.rmt import (
    build_intertwiner,
    conjugation_defect,
    partition_defect,
    polar_sign_unitary,
    resample,
    sample_haar_unitary,
)
from app.utils.samplers import rotated_diagonal_sampler
from app.utils.streams import StreamFactory

logger = logging.getLogger(__name__)


def _poly(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(x, coef)


@dataclass(frozen=True, eq=False)
class Reassembly:
    spec: ReassemblySpec
    scene: MatrixScene
    spectrum: np.ndarray
    p_masks: tuple[np.ndarray, ...]
    q_masks: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def N(self) -> int:
        return self.scene.N

    def _W(self, i: int) -> np.ndarray:
        return self.scene[f"W{i + 1}"]

    def _U(self, i: int) -> np.ndarray:
        return self.scene[f"U{i + 1}"]

    # ---------- elements ----------

    def family_element(self, i: int, polys: list[np.ndarray]) -> np.ndarray:
        """
        Element of the reassembled family i (0-based) with one polynomial
        (coefficient array) per corner: A'_1 takes n, A'_i takes 2.
        """
        lam = self.spectrum
        if i == 0:
            if len(polys) != self.n:
                raise DomainError(f"family 1 takes {self.n} corner polynomials")
            out = np.diag(_poly(polys[0], lam) * self.q_masks[0]).astype(complex)
            for k in range(1, self.n):
                M = self._U(k) @ self._W(k)
                out = out + (M * (_poly(polys[k], lam) * self.p_masks[k])[None, :]) @ adjoint(M)
            return out
        if len(polys) != 2:
            raise DomainError(f"family {i + 1} takes 2 corner polynomials")
        W, U = self._W(i), self._U(i)
        own = (W * (_poly(polys[0], lam) * (1.0 - self.p_masks[i]))[None, :]) @ adjoint(W)
        moved = U @ np.diag(_poly(polys[1], lam) * self.q_masks[i]) @ U
        return own + moved

    def family_sampler(self, i: int, degree: int = 2) -> ElementSampler:
        corners = self.n if i == 0 else 2

        def draw(rng: np.random.Generator) -> np.ndarray:
            return self.family_element(i, [rng.standard_normal(degree + 1) for _ in range(corners)])

        return ElementSampler(f"reassembled-{i + 1}", draw)

    def factor_sampler(self, i: int, degree: int = 2) -> ElementSampler:
        """Random elements of the original factor A_i."""
        rotation = None if i == 0 else self._W(i)
        return rotated_diagonal_sampler(f"factor-{i + 1}", self.spectrum, rotation, degree)

    def generators(self, rng: np.random.Generator) -> list[np.ndarray]:
        """One generic element per reassembled family: affine on each corner."""
        out = []
        for i in range(self.n):
            corners = self.n if i == 0 else 2
            out.append(self.family_element(i, [rng.standard_normal(2) for _ in range(corners)]))
        return out


def build_reassembly(spec: ReassemblySpec, N: int, streams: StreamFactory) -> Reassembly:
    ranks = spec.ranks(N)
    n = spec.n
    lam = -1.0 + (2.0 * np.arange(N) + 1.0) / N
    eye = np.eye(N)

    p_masks, q_masks = [], []
    offset = 0
    for k in ranks:
        p = np.zeros(N)
        p[:k] = 1.0
        q = np.zeros(N)
        q[offset : offset + k] = 1.0
        offset += k
        p_masks.append(p)
        q_masks.append(q)

    matrices: dict[str, np.ndarray] = {}
    tags: dict[str, str] = {}

    def put(name, m, tag):
        matrices[name] = m
        tags[name] = tag

    put("W1", eye.astype(complex), "unitary")
    put("P1", np.diag(p_masks[0]).astype(complex), "projection")
    put("Q1", np.diag(q_masks[0]).astype(complex), "projection")
    put("U1", eye.astype(complex), "unitary")
    put("H1", np.diag(lam).astype(complex), "selfadjoint")

    for i in range(1, n):
        Q = np.diag(q_masks[i]).astype(complex)

        def attempt(a, i=i, Q=Q):
            W = sample_haar_unitary(N, streams(f"factor-{i + 1}", a))
            P = hermitize((W * p_masks[i][None, :]) @ adjoint(W))
            return W, P, polar_sign_unitary(P + Q - eye)

        W, P, U = resample(attempt, f"factor {i + 1}")
        put(f"W{i + 1}", W, "unitary")
        put(f"P{i + 1}", P, "projection")
        put(f"Q{i + 1}", Q, "projection")
        put(f"U{i + 1}", hermitize(U), "unitary")
        put(f"H{i + 1}", hermitize((W * lam[None, :]) @ adjoint(W)), "selfadjoint")

    ps = [matrices[f"P{i + 1}"] for i in range(n)]
    us = [matrices[f"U{i + 1}"] for i in range(n)]
    defect = partition_defect(ps, us)
    if defect > settings.partition_tol:
        raise PartitionError(f"sum u_i p_i u_i misses the identity by {defect:.3g}")

    if n == 2:
        put("p11", matrices["P1"], "projection")
        put("p12", eye - matrices["P1"], "projection")
        put("p21", matrices["P2"], "projection")
        put("p22", eye - matrices["P2"], "projection")

    if spec.unitary_mode == "haar":
        _attach_haar_intertwiner(matrices, tags, n, N, lam, streams)

    scene = MatrixScene(N=N, seed=streams.seed, matrices=matrices, tags=tags)
    reassembly = Reassembly(spec, scene, lam, tuple(p_masks), tuple(q_masks))

    for i in range(n):
        identity_poly = [np.array([0.0, 1.0])] * (n if i == 0 else 2)
        put(f"A{i + 1}", hermitize(reassembly.family_element(i, identity_poly)), "selfadjoint")
    scene = MatrixScene(N=N, seed=streams.seed, matrices=matrices, tags=tags)
    logger.debug("reassembly n=%d N=%d ranks=%s built", n, N, ranks)
    return Reassembly(spec, scene, lam, tuple(p_masks), tuple(q_masks))


def _attach_haar_intertwiner(matrices, tags, n, N, lam, streams: StreamFactory) -> None:
    """
    A second choice of unitaries v_i = R u_i D_i with R Haar and D_i a random
    unitary of A_i, plus the intertwiner w between the two reassemblies.
    """
    R = sample_haar_unitary(N, streams("reassembly-haar"))
    ps, us, vs, elements = [], [], [], []
    for i in range(n):
        W = matrices[f"W{i + 1}"]
        rng = streams("reassembly-phase", i)
        phases = np.exp(2j * np.pi * rng.random(N))
        D = (W * phases[None, :]) @ adjoint(W)
        ps.append(matrices[f"P{i + 1}"])
        us.append(matrices[f"U{i + 1}"])
        vs.append(R @ us[-1] @ D)
        elements.append([matrices[f"H{i + 1}"], (W * (lam**2)[None, :]) @ adjoint(W)])
        matrices[f"D{i + 1}"] = D
        tags[f"D{i + 1}"] = "unitary"
        matrices[f"V{i + 1}"] = vs[-1]
        tags[f"V{i + 1}"] = "unitary"

    w = build_intertwiner(ps, us, vs)
    defect = conjugation_defect(w, ps, us, vs, elements)
    if defect > 1e-7:
        raise PartitionError(f"intertwiner fails the conjugation identity (defect {defect:.3g})")
    matrices["R"] = R
    tags["R"] = "unitary"
    matrices["Wint"] = w
    tags["Wint"] = "unitary"


def corner_defect(reassembly: Reassembly) -> float:
    """|u p12 u - p21| for two factors."""
    if reassembly.n != 2:
        raise DomainError("corner projections exist only for two factors")
    s = reassembly.scene
    return frobenius(s["U2"] @ s["p12"] @ s["U2"] - s["p21"])
