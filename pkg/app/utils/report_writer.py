"""JSON and CSV rendering of suite reports."""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Optional

from app.schemas.report_schemas import SuiteReport

FREENESS_COLUMNS = ["pattern", "mean_abs_trace", "stderr", "trials", "N", "verdict"]
CHECK_COLUMNS = ["check", "value", "expected", "deviation", "tolerance", "verdict"]


def report_json(report: SuiteReport) -> str:
    return report.model_dump_json(indent=2, by_alias=True)


def report_csv(report: SuiteReport) -> str:
    """
    Freeness rows when the report has any (pattern labelled "<test>/<tags>"),
    otherwise the check rows.
    """
    buf = io.StringIO()
    if report.freeness:
        writer = csv.DictWriter(buf, fieldnames=FREENESS_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for fr in report.freeness:
            for row in fr.rows:
                writer.writerow(
                    {
                        "pattern": f"{fr.label}/{row.pattern}",
                        "mean_abs_trace": repr(row.mean_abs_trace),
                        "stderr": repr(row.stderr),
                        "trials": row.trials,
                        "N": row.N,
                        "verdict": row.verdict,
                    }
                )
    else:
        writer = csv.DictWriter(buf, fieldnames=CHECK_COLUMNS, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for check in report.checks:
            writer.writerow({k: ("" if v is None else v) for k, v in check.model_dump().items()})
    return buf.getvalue()


def render(report: SuiteReport, fmt: str) -> str:
    return report_csv(report) if fmt == "csv" else report_json(report)


def write_report(report: SuiteReport, out: Optional[str], fmt: str, directory: bool = False) -> Optional[Path]:
    """Write to ``out``; with ``directory`` the file is ``out/<suite>.<fmt>``."""
    if not out:
        return None
    path = Path(out)
    if directory:
        path.mkdir(parents=True, exist_ok=True)
        path = path / f"{report.suite}.{fmt}"
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(report, fmt), encoding="utf-8")
    return path
