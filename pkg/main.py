import logging
import sys
from typing import Optional, Sequence

import click

from app.core.errors import WorkbenchError
from app.core.log import setup_logging
from app.suites import RUNNERS, SUITE_MODULES
from app.suites.common import build_config, str_list, suite_options, summary_line
from app.utils.report_writer import write_report

logger = logging.getLogger("freeprob")


@click.group(invoke_without_command=True)
@click.option("--log-level", help="Logging level (default from FREEPROB_LOG_LEVEL).")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Free-probability verification workbench."""
    setup_logging(log_level)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help(), err=True)
        ctx.exit(2)


# Suites
for module in SUITE_MODULES.values():
    cli.add_command(module.command)


@cli.command("all")
@suite_options
@click.option("--suites", "suites", callback=str_list, help="Comma-separated subset of suites to run.")
def run_all(config_path, **flags):
    """Run every suite (or the --suites subset) and write one report per suite."""
    config = build_config(config_path, **flags)
    names = config.suites or list(RUNNERS)
    exit_code = 0
    for name in names:
        report = RUNNERS[name](config)
        path = write_report(report, config.out, config.format, directory=True)
        click.echo(summary_line(report, path))
        if not report.passed:
            exit_code = 1
    logger.info("all: %d suites, exit %d", len(names), exit_code)
    return exit_code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the process exit code: 0 pass, 1 fail, 2 usage or config error."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="freeprob", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 2 if isinstance(exc, click.UsageError) else exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except WorkbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(run())
