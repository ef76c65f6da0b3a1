# app/suites/weak_fc_suite.py

import click

from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, suite_command
from app.utils.haar_checks import weak_fc_check
from app.utils.streams import StreamFactory


def run_weak_fc(config: RunConfig) -> SuiteReport:
    """Products and conjugates of odd sign unitaries against B_1 * B_2."""
    config.require_trials()
    checks = CheckList()
    streams = StreamFactory(config.seed).child("weak-fc")
    max_length = config.max_length or 6
    kinds = ["product", "conjugated"] if config.kind == "both" else [config.kind]

    for kind in kinds:
        with checks.guard(f"weak-fc-{kind}"):
            checks.add(
                weak_fc_check(kind, config.N, config.trials, streams=streams, max_length=max_length, rule=config.rule())
            )
    if config.controls and "product" in kinds:
        with checks.guard("weak-fc-control"):
            control = weak_fc_check(
                "product", config.N, config.trials,
                streams=streams, max_length=max_length, control=True, rule=config.rule(),
            )
            checks.add(control, expect_pass=False)

    return checks.report("weak-fc", config)


command = suite_command(
    "weak-fc",
    run_weak_fc,
    extra=[click.option("--kind", type=click.Choice(["product", "conjugated", "both"]), help="Which test element.")],
)
