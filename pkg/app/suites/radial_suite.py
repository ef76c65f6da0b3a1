# app/suites/radial_suite.py

import click

from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, suite_command
from app.utils.haar_checks import odd_sign_pair, radial_check
from app.utils.rmt import haar_moments, odd_sign, orthogonality_defect
from app.utils.streams import StreamFactory

HAAR_MOMENTS = 4
# |tau(W f(U + U*))| fluctuates like sqrt(log N) / N for the odd sign W
ORTHOGONALITY_CONSTANT = 20.0


def run_radial(config: RunConfig) -> SuiteReport:
    """The radial algebra of n Haar unitaries against V = W_i W_j."""
    config.require_trials()
    checks = CheckList()
    streams = StreamFactory(config.seed).child("radial")
    max_length = config.max_length or 6
    N = config.N

    with checks.guard("radial"):
        checks.add(
            radial_check(
                config.n, config.i, config.j, N, config.trials,
                streams=streams, max_length=max_length, rule=config.rule(),
            )
        )

        # same streams as radial_check, so these are the matrices it used
        Ws = {}
        for k in (config.i, config.j):
            U, Ws[k] = odd_sign_pair("radial-haar", k, N, streams)
            defect = orthogonality_defect(U, odd_sign, streams("orthogonality", k))
            checks.at_most(f"odd_sign_orthogonality_W{k}", defect, ORTHOGONALITY_CONSTANT / N)
        V = Ws[config.i] @ Ws[config.j]
        for k, m in enumerate(haar_moments(V, HAAR_MOMENTS), start=1):
            checks.at_most(f"haar_moment_V^{k}", abs(m), 10.0 / N)

        if config.controls:
            control = radial_check(
                config.n, config.i, config.j, N, config.trials,
                streams=streams, max_length=max_length, control=True, rule=config.rule(),
            )
            checks.add(control, expect_pass=False)

    return checks.report("radial", config)


command = suite_command(
    "radial",
    run_radial,
    extra=[
        click.option("--i", "i", type=int, help="First index of V = W_i W_j."),
        click.option("--j", "j", type=int, help="Second index of V = W_i W_j."),
    ],
)
