# app/suites/common.py

import json
import logging
from contextlib import contextmanager
from typing import Any, Callable, Dict, List, Optional

import click

from app.core.errors import ConfigError, NumericalError
from app.models.measure_model import AtomicMeasure
from app.schemas.config_schemas import RunConfig, load_config
from app.schemas.measure_schemas import MeasureLiteral
from app.schemas.report_schemas import CheckRow, FreenessReport, SuiteReport
from app.utils.report_writer import write_report

logger = logging.getLogger(__name__)


# -------------------------------------------------
# Check collection
# -------------------------------------------------
class CheckList:
    def __init__(self):
        self.rows: List[CheckRow] = []
        self.freeness: List[FreenessReport] = []
        self.measures: List[MeasureLiteral] = []

    def close(self, name: str, value: float, expected: float, tolerance: float) -> bool:
        deviation = abs(value - expected)
        ok = deviation <= tolerance
        self.rows.append(
            CheckRow(
                check=name,
                value=float(value),
                expected=float(expected),
                deviation=float(deviation),
                tolerance=float(tolerance),
                verdict="pass" if ok else "fail",
            )
        )
        return ok

    def at_most(self, name: str, value: float, bound: float) -> bool:
        ok = value <= bound
        self.rows.append(
            CheckRow(check=name, value=float(value), tolerance=float(bound), verdict="pass" if ok else "fail")
        )
        return ok

    def flag(self, name: str, ok: bool, value: Any = None, expected: Any = None, detail: Optional[str] = None) -> bool:
        self.rows.append(
            CheckRow(
                check=name,
                value=None if value is None else (value if isinstance(value, (int, float)) else str(value)),
                expected=None if expected is None else (expected if isinstance(expected, (int, float)) else str(expected)),
                verdict="pass" if ok else "fail",
                detail=detail,
            )
        )
        return ok

    def measure(self, measure: AtomicMeasure, label: str) -> None:
        """Record a measure the suite worked with, in the report's atom-list form."""
        self.measures.append(MeasureLiteral.from_measure(measure, label=label))

    def add(self, report: FreenessReport, expect_pass: bool = True) -> None:
        """A freeness report; control runs (expect_pass=False) are recorded as checks instead."""
        if expect_pass:
            self.freeness.append(report)
            return
        worst = report.worst_row
        self.flag(
            f"{report.label} fails",
            not report.passed,
            value=worst.mean_abs_trace if worst else None,
            detail=f"worst pattern {worst.pattern}" if worst else None,
        )

    @contextmanager
    def guard(self, name: str):
        """Numerical failures inside the block become a failed check."""
        try:
            yield
        except NumericalError as exc:
            logger.warning("%s: %s", name, exc)
            self.flag(name, False, detail=f"{type(exc).__name__}: {exc}")

    def report(self, suite: str, config: RunConfig, summary: str = "") -> SuiteReport:
        return SuiteReport(
            suite=suite,
            config=config.model_dump(mode="json"),
            checks=self.rows,
            freeness=self.freeness,
            measures=self.measures,
            summary=summary,
        )


# -------------------------------------------------
# Shared options
# -------------------------------------------------
def _parse_tolerance(values) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for item in values or ():
        key, sep, value = item.partition("=")
        if not sep:
            key, value = "abs_floor", item
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"bad --tolerance value {item!r}") from None
    return out


def _split(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


def suite_options(fn: Callable) -> Callable:
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON config file."),
        click.option("--seed", type=int, help="64-bit master seed."),
        click.option("--N", "N", type=int, help="Matrix dimension."),
        click.option("--trials", type=int, help="Trials per pattern."),
        click.option("--alpha", help="Comma-separated projection traces, e.g. 1/2,1/4."),
        click.option("--n", "n", type=int, help="Number of factors."),
        click.option("--max-length", type=int, help="Longest alternating pattern."),
        click.option("--out", help="Report file (directory for 'all')."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), help="Report format."),
        click.option("--tolerance", multiple=True, help="Verdict constant override KEY=VALUE."),
        click.option("--controls/--no-controls", default=None, help="Run the control cases."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def build_config(config_path: Optional[str], **flags) -> RunConfig:
    overrides = {
        "seed": flags.pop("seed", None),
        "N": flags.pop("N", None),
        "trials": flags.pop("trials", None),
        "alpha": _split(flags.pop("alpha", None)),
        "n": flags.pop("n", None),
        "max_length": flags.pop("max_length", None),
        "out": flags.pop("out", None),
        "format": flags.pop("fmt", None),
        "controls": flags.pop("controls", None),
    }
    tolerance = _parse_tolerance(flags.pop("tolerance", ()))
    if tolerance:
        overrides["tolerance"] = tolerance
    overrides.update(flags)
    return load_config(config_path, overrides)


def parse_json_option(name: str, value: Optional[str]) -> Optional[dict]:
    if value is None:
        return None
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--{name} is not valid JSON: {exc}") from exc


def execute(suite: str, runner: Callable[[RunConfig], SuiteReport], config: RunConfig) -> int:
    """Run one suite, write its report and print the one-line summary."""
    report = runner(config)
    path = write_report(report, config.out, config.format)
    click.echo(summary_line(report, path))
    logger.info("%s: %s", suite, report.verdict)
    return 0 if report.passed else 1


def summary_line(report: SuiteReport, path=None) -> str:
    failed = [c.check for c in report.checks if c.verdict == "fail"]
    failed += [f.label for f in report.freeness if not f.passed]
    line = f"{report.suite}: {report.verdict.upper()} ({len(report.checks)} checks, {len(report.freeness)} freeness tests)"
    if report.summary:
        line += f" {report.summary}"
    if failed:
        line += f" failed: {', '.join(failed[:5])}"
    if path is not None:
        line += f" -> {path}"
    return line


def suite_command(name: str, runner: Callable[[RunConfig], SuiteReport], extra: Optional[List[Callable]] = None):
    """A click command running ``runner`` with the shared options plus ``extra`` ones."""

    def callback(config_path, **flags):
        return execute(name, runner, build_config(config_path, **flags))

    callback = suite_options(callback)
    for option in reversed(extra or []):
        callback = option(callback)
    return click.command(name, help=runner.__doc__)(callback)


# -------------------------------------------------
# Option value converters
# -------------------------------------------------
def float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(v) for v in _split(value)]
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers") from None


def str_list(ctx, param, value):
    return _split(value)


def json_value(ctx, param, value):
    return parse_json_option(param.name, value)
