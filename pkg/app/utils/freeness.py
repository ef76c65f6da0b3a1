"""
Statistical freeness and generation tests on matrix scenes.

A family of samplers passes against a set of alternating patterns when the
normalized traces of products of centered, unit-norm draws stay within the
verdict rule's threshold of zero.
"""
from __future__ import annotations

import itertools
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from app.core.config import MAX_THREADS, settings
from app.core.errors import ConditioningWarning, DomainError
from app.models.scene_model import ElementSampler, MatrixScene, WordPattern
from app.schemas.report_schemas import FreenessReport, PatternRow, VerdictRule
from app.utils.functional_calculus import l2_norm, normalized_trace, trace_of_product
from app.utils.streams import StreamFactory

logger = logging.getLogger(__name__)


def alternating_patterns(
    n_tags: int, max_length: int, min_length: int = 2, first_tag: int | None = None
) -> list[WordPattern]:
    """All patterns over tags 1..n_tags with adjacent tags distinct, shortest first."""
    if n_tags < 2:
        raise DomainError("alternating patterns need at least two tags")
    out = []
    tags = range(1, n_tags + 1)
    for length in range(min_length, max_length + 1):
        for seq in itertools.product(tags, repeat=length):
            if first_tag is not None and seq[0] != first_tag:
                continue
            if all(a != b for a, b in zip(seq, seq[1:])):
                out.append(WordPattern(tags=seq))
    return out


def default_rule() -> VerdictRule:
    return VerdictRule(abs_floor=settings.abs_floor, z_mult=settings.z_mult, bias_term=settings.bias_term)


def _centered(x: np.ndarray, trace: complex | None) -> np.ndarray:
    N = x.shape[0]
    t = normalized_trace(x) if trace is None else trace
    x = x - t * np.eye(N)
    norm = l2_norm(x)
    return x / norm if norm > 1e-12 else x


def _map(fn, items):
    if MAX_THREADS > 1:
        with ThreadPoolExecutor(max_workers=MAX_THREADS) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def freeness_test(
    scene: MatrixScene,
    families: Sequence[ElementSampler],
    patterns: Sequence[WordPattern],
    trials: int,
    *,
    streams: StreamFactory,
    rule: VerdictRule | None = None,
    label: str = "freeness",
) -> FreenessReport:
    if trials < 30:
        raise DomainError(f"freeness_test needs at least 30 trials, got {trials}")
    if not patterns:
        raise DomainError("no patterns to test")
    rule = rule or default_rule()
    N = scene.N

    rows = []
    for pattern in patterns:
        if max(pattern.tags) > len(families):
            raise DomainError(f"pattern {pattern.label} uses more than {len(families)} families")

        def one_trial(t: int, pattern=pattern) -> complex:
            rng = streams(f"{label}:{pattern.label}", t)
            prod = None
            for k, tag in enumerate(pattern.tags):
                recipe = pattern.slot(k)
                if recipe.kind == "specific":
                    x = _centered(np.asarray(scene[recipe.matrix]), recipe.trace)
                else:
                    x = _centered(families[tag - 1](rng), None)
                if prod is None:
                    prod = x
                elif k == len(pattern) - 1:
                    return trace_of_product(prod, x)
                else:
                    prod = prod @ x
            return normalized_trace(prod)

        values = np.abs(np.array(_map(one_trial, range(trials))))
        mean = math.fsum(values) / trials
        stderr = float(np.std(values, ddof=1)) / math.sqrt(trials)
        threshold = rule.threshold(stderr, N)
        rows.append(
            PatternRow(
                pattern=pattern.label,
                mean_abs_trace=mean,
                stderr=stderr,
                trials=trials,
                N=N,
                threshold=threshold,
                verdict="pass" if mean <= threshold else "fail",
            )
        )

    verdict = "pass" if all(r.verdict == "pass" for r in rows) else "fail"
    worst = max(rows, key=lambda r: r.mean_abs_trace)
    logger.info("%s: %s over %d patterns (worst %s: %.4f)", label, verdict, len(rows), worst.pattern, worst.mean_abs_trace)
    return FreenessReport(label=label, N=N, trials=trials, rule=rule, rows=rows, verdict=verdict)


# -------------------------------------------------
# Generation
# -------------------------------------------------
def commutant_dimension(generators: Sequence[np.ndarray], rtol: float | None = None) -> int:
    """
    dim {X : XG = GX for every generator G}, as the nullity of
    sum_G M_G* M_G with M_G = G^T (x) 1 - 1 (x) G acting on column-stacked X.
    """
    if not generators:
        raise DomainError("generator set is empty")
    rtol = settings.commutant_rtol if rtol is None else rtol
    N = generators[0].shape[0]
    eye = np.eye(N)

    gram = np.zeros((N * N, N * N), dtype=complex)
    for G in generators:
        G = np.asarray(G, dtype=complex)
        Gt, Gc, Gh = G.T, G.conj(), G.conj().T
        gram += np.kron(Gc @ Gt, eye)
        gram -= np.kron(Gc, G)
        gram -= np.kron(Gt, Gh)
        gram += np.kron(eye, Gh @ G)

    lam = np.linalg.eigvalsh(gram)
    top = float(lam[-1])
    if top <= 0.0:
        return N * N
    threshold = rtol * top
    near = np.count_nonzero((lam > threshold / 100.0) & (lam < threshold * 100.0))
    if near:
        message = f"{near} eigenvalues within two decades of the null threshold {threshold:.3g}"
        warnings.warn(message, ConditioningWarning, stacklevel=2)
        logger.warning(message)
    return int(np.count_nonzero(lam <= threshold))


def generation_check(scene: MatrixScene, generators: Sequence[np.ndarray | str]) -> int:
    """Commutant dimension of generators given as matrices or scene names."""
    mats = [scene[g] if isinstance(g, str) else np.asarray(g) for g in generators]
    return commutant_dimension(mats)


# -------------------------------------------------
# Finite-N bias
# -------------------------------------------------
def bias_slope(sizes: Sequence[int], means: Sequence[float]) -> float:
    """Least-squares slope of log(mean |trace|) against log N."""
    if len(sizes) < 2:
        raise DomainError("need at least two sizes for a slope")
    slope, _ = np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(means, float)), 1)
    return float(slope)
