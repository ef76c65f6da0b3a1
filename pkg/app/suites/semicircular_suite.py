# app/suites/semicircular_suite.py

import click

from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, float_list, suite_command
from app.utils.haar_checks import semicircular_perp_check
from app.utils.streams import StreamFactory


def run_semicircular(config: RunConfig) -> SuiteReport:
    """Semicircular elements along perpendicular directions t and t'."""
    config.require_trials()
    checks = CheckList()
    streams = StreamFactory(config.seed).child("semicircular")
    checks.add(
        semicircular_perp_check(
            config.t, config.t_prime, config.N, config.trials,
            streams=streams, max_length=config.max_length or 6, rule=config.rule(),
        )
    )
    return checks.report("semicircular", config)


command = suite_command(
    "semicircular",
    run_semicircular,
    extra=[
        click.option("--t", "t", callback=float_list, help="Direction t, comma-separated."),
        click.option("--t-prime", "t_prime", callback=float_list, help="Direction t', comma-separated."),
    ],
)
