# app/suites/exact_trace_suite.py

import click
import sympy
from pydantic import ValidationError

from app.core.errors import ConfigError
from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.schemas.word_schemas import WordRequest
from app.suites.common import CheckList, json_value, suite_command
from app.utils.freeprod import FreeProduct, weak_fc_exact_check

DEFAULT_WORD = {"projections": {"p": "1/2", "q": "1/2"}, "word": ["p", "q", "p", "q"]}


def _matches(value, expect: str) -> bool:
    try:
        expected = sympy.sympify(expect, rational=True)
    except (sympy.SympifyError, TypeError) as exc:
        raise ConfigError(f"cannot parse --expect {expect!r}") from exc
    return sympy.simplify(value.to_sympy() - expected) == 0


def run_exact_trace(config: RunConfig) -> SuiteReport:
    """Exact free-product trace of a word given as JSON."""
    try:
        request = WordRequest.model_validate(config.word or DEFAULT_WORD)
    except ValidationError as exc:
        raise ConfigError(f"invalid word: {exc}") from exc

    word, algebras = request.build()
    value = FreeProduct(algebras).trace(word)
    click.echo(str(value))

    checks = CheckList()
    if config.expect is not None:
        checks.flag("trace", _matches(value, config.expect), value=str(value), expected=config.expect)
    else:
        checks.flag("trace", True, value=str(value))

    if config.controls:
        nonzero = {k: v for k, v in weak_fc_exact_check().items() if not v.is_zero}
        checks.flag(
            "weak_fc_exact",
            not nonzero,
            value=len(nonzero),
            expected=0,
            detail=", ".join(sorted(nonzero)[:3]) or None,
        )
    return checks.report("exact-trace", config, summary=f"trace = {value}")


command = suite_command(
    "exact-trace",
    run_exact_trace,
    extra=[
        click.option("--word", callback=json_value, help="Word as JSON (see WordRequest)."),
        click.option("--expect", help="Expected exact value, e.g. 3/16."),
    ],
)
