# app/suites/convolve_suite.py

import math
from fractions import Fraction

import numpy as np

from app.core.config import settings
from app.models.measure_model import AtomicMeasure
from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, suite_command
from app.utils.freeprod import free_sum_moments
from app.utils.measures import (
    atom_mass,
    check_herglotz,
    check_normalization,
    consistency_grid,
    free_sum_evaluator,
    free_sum_r_evaluator,
    moments_from_cauchy,
    stieltjes_density,
)
from app.utils.rmt import sample_projection_pair
from app.utils.streams import StreamFactory

K_MAX = 8
RMT_MOMENTS = 4
DEFAULT_ALPHAS = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]


def arcsine_cdf(x: np.ndarray) -> np.ndarray:
    """CDF of the arcsine law on [0, 2]."""
    return 2.0 / math.pi * np.arcsin(np.sqrt(np.clip(x, 0.0, 2.0) / 2.0))


def run_convolve(config: RunConfig) -> SuiteReport:
    """Free sum of two projections: exact, transform and random-matrix moments and atoms."""
    checks = CheckList()
    streams = StreamFactory(config.seed).child("convolve")

    for alpha in config.alpha or DEFAULT_ALPHAS:
        tag = f"[{alpha}]"
        G = free_sum_evaluator(alpha)
        checks.measure(AtomicMeasure.bernoulli(alpha), label=f"p{tag}")

        with checks.guard(f"herglotz{tag}"):
            check_herglotz(G)
            checks.flag(f"herglotz{tag}", True)
        with checks.guard(f"normalization{tag}"):
            checks.at_most(f"normalization{tag}", check_normalization(G), 1e-2)

        # ---------- exact moments ----------
        exact = free_sum_moments(alpha, K_MAX)
        if alpha == Fraction(1, 2):
            for k, value in enumerate(exact, start=1):
                expected = Fraction(math.comb(2 * k, k), 2**k)
                checks.flag(f"exact_moment_{k}{tag}", value == expected, value=str(value), expected=str(expected))

        # ---------- transform side ----------
        with checks.guard(f"cauchy_moments{tag}"):
            numeric = moments_from_cauchy(G, K_MAX)
            for k, (num, ex) in enumerate(zip(numeric, exact), start=1):
                checks.close(f"cauchy_moment_{k}{tag}", num, float(ex), 1e-6)

        with checks.guard(f"atoms{tag}"):
            checks.close(f"atom_at_0{tag}", atom_mass(G, 0.0), max(1.0 - 2.0 * float(alpha), 0.0), 1e-3)
            for x in (0.5, 1.0, 1.5, 2.0):
                checks.at_most(f"atom_at_{x:g}{tag}", atom_mass(G, x), 1e-3)

        with checks.guard(f"density_mass{tag}"):
            grid = np.linspace(-0.5, 2.5, 30000)
            sample = stieltjes_density(G, grid, 1e-3)
            checks.close(f"density_mass{tag}", sample.total_mass, 1.0, settings.mass_tolerance)

        with checks.guard(f"r_transform{tag}"):
            probes = consistency_grid()
            G_r = free_sum_r_evaluator(alpha)
            check_herglotz(G_r, probes)
            via_r = G_r.values(probes)
            checks.at_most(f"r_transform_consistency{tag}", float(np.max(np.abs(via_r - G.values(probes)))), 1e-8)

        # ---------- random matrices ----------
        if (alpha * config.N).denominator == 1:
            _rmt_checks(checks, alpha, config, streams.child(str(alpha)), exact)

    return checks.report("convolve", config)


def _rmt_checks(checks: CheckList, alpha, config: RunConfig, streams: StreamFactory, exact) -> None:
    tag = f"[{alpha}]"
    N = config.N
    moments = np.empty((config.trials, RMT_MOMENTS))
    kernel = np.empty(config.trials)
    ks_distance = None
    for t in range(config.trials):
        P1, P2 = sample_projection_pair(alpha, N, streams("pair", t))
        eig = np.linalg.eigvalsh(P1 + P2)
        moments[t] = [np.mean(eig**k) for k in range(1, RMT_MOMENTS + 1)]
        kernel[t] = np.count_nonzero(np.abs(eig) < 1e-8) / N
        if t == 0 and alpha == Fraction(1, 2):
            ordered = np.sort(eig)
            empirical = np.arange(1, N + 1) / N
            ks_distance = float(np.max(np.abs(empirical - arcsine_cdf(ordered))))

    for k in range(RMT_MOMENTS):
        mean = math.fsum(moments[:, k]) / config.trials
        stderr = float(np.std(moments[:, k], ddof=1)) / math.sqrt(config.trials) if config.trials > 1 else 0.0
        checks.close(f"rmt_moment_{k + 1}{tag}", mean, float(exact[k]), 3.0 * stderr + 10.0 / N)
    checks.close(f"rmt_kernel_fraction{tag}", float(np.mean(kernel)), max(1.0 - 2.0 * float(alpha), 0.0), 2.0 / N)
    if ks_distance is not None:
        checks.at_most(f"rmt_arcsine_ks{tag}", ks_distance, 0.05)


command = suite_command("convolve", run_convolve)
