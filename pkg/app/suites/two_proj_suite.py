# app/suites/two_proj_suite.py

import math
from fractions import Fraction

import numpy as np

from app.models.algebra_model import FiniteAbelianAlgebra, FreeWord
from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, suite_command
from app.utils.freeprod import FreeProduct
from app.utils.rmt import anticommutator_defect, complement_intertwiner, resample, sample_projection_pair
from app.utils.streams import StreamFactory
from app.utils.twoproj import (
    anticommutator_defect as node_anticommutator_defect,
    build_two_projection_model,
    moment_with_error,
    node_identity_defects,
    sign_unitary_moment,
    swap_identity_defect,
)

DEFAULT_ALPHAS = [Fraction(1, 2), Fraction(1, 4)]
PQ_WORDS = ["pq", "pqpq", "pqpqpq", "ppq", "pqqp"]
RMT_WORDS = ["u", "up", "upq", "upuq", "uqup"]
RANDOM_SUFFIXES = 10


def run_two_proj(config: RunConfig) -> SuiteReport:
    """Sign unitary of two free projections on the quadrature model."""
    checks = CheckList()
    streams = StreamFactory(config.seed).child("two-proj")

    for alpha in config.alpha or DEFAULT_ALPHAS:
        tag = f"[{alpha}]"
        a = float(alpha)
        with checks.guard(f"calibration{tag}"):
            model = build_two_projection_model(alpha, config.node_count)
            checks.close(f"total_weight{tag}", model.total_weight, 1.0, 1e-8)

            # ---------- basic moments ----------
            checks.close(f"tau_p{tag}", sign_unitary_moment(model, "p"), a, 1e-8)
            checks.close(f"tau_q{tag}", sign_unitary_moment(model, "q"), a, 1e-8)
            checks.close(f"tau_u{tag}", sign_unitary_moment(model, "u"), -(1 - 2 * a), 1e-8)
            checks.close(f"tau_uu{tag}", sign_unitary_moment(model, "uu"), 1.0, 1e-8)
            checks.close(f"tau_upuq{tag}", sign_unitary_moment(model, "upuq"), a, 1e-8)

            # ---------- identities ----------
            for name, defect in node_identity_defects(model).items():
                checks.at_most(f"{name}{tag}", defect, 1e-12)
            for name, defect in node_anticommutator_defect(model).items():
                checks.at_most(f"anticommutator_{name}{tag}", defect, 1e-12)
            checks.at_most(f"swap_identity{tag}", swap_identity_defect(model), 1e-12)

            # ---------- exact engine agreement ----------
            a1 = FiniteAbelianAlgebra(id=1, atom_weights=(alpha, 1 - alpha))
            a2 = FiniteAbelianAlgebra(id=2, atom_weights=(alpha, 1 - alpha))
            letters = {"p": a1.projection([0]), "q": a2.projection([0])}
            product = FreeProduct([a1, a2])
            for word in PQ_WORDS:
                exact = product.trace(FreeWord(tuple(letters[c] for c in word)))
                checks.close(f"exact_{word}{tag}", sign_unitary_moment(model, word), float(exact), 1e-6)

            # ---------- intertwining on random suffixes ----------
            rng = streams(f"suffix-{alpha}")
            worst = 0.0
            for _ in range(RANDOM_SUFFIXES):
                suffix = "".join(rng.choice(list("pqu"), size=int(rng.integers(1, 7))))
                worst = max(
                    worst,
                    abs(sign_unitary_moment(model, "upu" + suffix) - sign_unitary_moment(model, "q" + suffix)),
                )
            checks.at_most(f"intertwining{tag}", worst, 1e-10)

            estimate = moment_with_error(model, "upq")
            checks.at_most(f"resolution_error_upq{tag}", estimate.est_error, 1e-6)

            if (alpha * config.N).denominator == 1:
                _rmt_checks(checks, alpha, model, config, streams.child(str(alpha)))

    return checks.report("two-proj", config)


def _rmt_checks(checks: CheckList, alpha, model, config: RunConfig, streams: StreamFactory) -> None:
    tag = f"[{alpha}]"
    N = config.N
    values = {w: np.empty(config.trials) for w in RMT_WORDS}
    for t in range(config.trials):

        def attempt(k, t=t):
            P1, P2 = sample_projection_pair(alpha, N, streams("pair", t * 16 + k))
            return P1, P2, complement_intertwiner(P1, P2)

        P1, P2, U = resample(attempt, f"projection pair {t}")
        mats = {"p": P1, "q": P2, "u": U}
        if t == 0:
            checks.at_most(f"rmt_u_p_u_equals_q{tag}", float(np.linalg.norm(U @ P1 @ U - P2)), 1e-8)
            defects = anticommutator_defect(P1, P2)
            checks.at_most(f"rmt_anticommutator{tag}", max(defects.values()), 1e-8)
        for w in RMT_WORDS:
            prod = mats[w[0]]
            for c in w[1:]:
                prod = prod @ mats[c]
            values[w][t] = np.trace(prod).real / N

    for w in RMT_WORDS:
        mean = math.fsum(values[w]) / config.trials
        stderr = float(np.std(values[w], ddof=1)) / math.sqrt(config.trials) if config.trials > 1 else 0.0
        checks.close(f"rmt_{w}{tag}", mean, sign_unitary_moment(model, w), 3.0 * stderr + 10.0 / N)


command = suite_command("two-proj", run_two_proj)
