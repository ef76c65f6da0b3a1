import csv
import io
import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.core.errors import ConfigError
from app.schemas import (
    CheckRow,
    FreenessReport,
    MeasureLiteral,
    PatternRow,
    RunConfig,
    SuiteReport,
    VerdictRule,
    WordRequest,
    load_config,
)
from app.utils.freeprod import trace_word
from app.utils.report_writer import report_csv, report_json, write_report


def _row(pattern, mean, threshold=0.05):
    return PatternRow(
        pattern=pattern,
        mean_abs_trace=mean,
        stderr=0.001,
        trials=30,
        N=512,
        threshold=threshold,
        verdict="pass" if mean <= threshold else "fail",
    )


def test_verdict_rule_threshold():
    rule = VerdictRule()
    assert rule.threshold(0.0, 512) == pytest.approx(0.04)
    assert rule.threshold(0.01, 100) == pytest.approx(0.14)


def test_config_parses_rationals():
    config = RunConfig(alpha=["1/2", [1, 4]], tolerance={"z_mult": 3.0})
    assert config.alpha == [Fraction(1, 2), Fraction(1, 4)]
    assert config.rule().z_mult == 3.0
    assert config.model_dump(mode="json")["alpha"] == ["1/2", "1/4"]


@pytest.mark.parametrize(
    "data",
    [
        {"alpha": ["3/4"]},
        {"tolerance": {"bogus": 1.0}},
        {"suites": ["nope"]},
        {"unknown_key": 1},
        {"n": 2, "i": 3},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        load_config(None, data)


def test_config_file_with_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 4, "N": 128, "alpha": ["1/3"]}), encoding="utf-8")
    config = load_config(str(path), {"N": 64, "trials": None})
    assert (config.seed, config.N, config.trials) == (4, 64, 100)
    assert config.alpha == [Fraction(1, 3)]


def test_unreadable_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path), {})
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"), {})


def test_require_trials():
    with pytest.raises(ConfigError):
        RunConfig(trials=10).require_trials()


def test_freeness_report_verdict_must_match_rows():
    rows = [_row("1-2", 0.01), _row("1-2-1-2", 0.2)]
    with pytest.raises(ValidationError):
        FreenessReport(label="x", N=512, trials=30, rule=VerdictRule(), rows=rows, verdict="pass")
    report = FreenessReport(label="x", N=512, trials=30, rule=VerdictRule(), rows=rows, verdict="fail")
    assert report.worst_row.pattern == "1-2-1-2"


def test_suite_verdict_is_a_conjunction():
    report = SuiteReport(
        suite="demo",
        config={},
        verdict="pass",
        checks=[CheckRow(check="a", verdict="pass"), CheckRow(check="b", verdict="fail")],
    )
    assert report.verdict == "fail"
    assert SuiteReport(suite="demo", config={}).passed


def test_report_json_and_csv(tmp_path):
    freeness = FreenessReport(
        label="pair", N=512, trials=30, rule=VerdictRule(), rows=[_row("1-2", 0.01)], verdict="pass"
    )
    report = SuiteReport(suite="demo", config={"seed": 0}, freeness=[freeness])

    data = json.loads(report_json(report))
    assert data["schema"] == 1
    assert data["verdict"] == "pass"
    assert data["freeness"][0]["rows"][0]["pattern"] == "1-2"

    rows = list(csv.DictReader(io.StringIO(report_csv(report))))
    assert rows[0]["pattern"] == "pair/1-2"
    assert float(rows[0]["mean_abs_trace"]) == 0.01

    path = write_report(report, str(tmp_path / "out"), "csv", directory=True)
    assert path.name == "demo.csv"
    assert write_report(report, None, "json") is None


def test_checks_csv():
    report = SuiteReport(suite="demo", config={}, checks=[CheckRow(check="a", value=1.5, verdict="pass")])
    rows = list(csv.DictReader(io.StringIO(report_csv(report))))
    assert rows == [{"check": "a", "value": "1.5", "expected": "", "deviation": "", "tolerance": "", "verdict": "pass"}]


def test_word_request_with_named_projections():
    request = WordRequest.model_validate({"projections": {"p": "1/2", "q": "1/2"}, "word": ["p", "q", "p", "q"]})
    word, algebras = request.build()
    assert trace_word(word, algebras) == Fraction(3, 16)


def test_word_request_with_trivial_projection():
    request = WordRequest.model_validate({"projections": {"p": "1", "q": "1/3"}, "word": ["p", "q"]})
    word, algebras = request.build()
    assert trace_word(word, algebras) == Fraction(1, 3)


def test_word_request_with_explicit_letters():
    request = WordRequest.model_validate(
        {
            "algebras": [{"id": 1, "weights": ["1/2", "1/2"]}, {"id": 2, "weights": ["1/4", "3/4"]}],
            "word": [{"algebra": 1, "values": [1, {"re": 0, "im": 1}]}, {"algebra": 2, "values": [2, 0]}],
        }
    )
    word, algebras = request.build()
    # tau(a) tau(b) = (1 + i)/2 * 1/2
    value = trace_word(word, algebras)
    assert value == algebras[0].unit().field.complex(Fraction(1, 4), Fraction(1, 4))


def test_word_request_rejects_unknown_letters():
    with pytest.raises(ValidationError):
        WordRequest.model_validate({"projections": {"p": "1/2"}, "word": ["p", "r"]})
    with pytest.raises(ValidationError):
        WordRequest.model_validate({"word": [{"algebra": 5, "values": [1]}]})


def test_measure_literal_uses_numerator_and_denominator():
    literal = MeasureLiteral.model_validate({"atoms": [[0.0, 3, 4], [1.0, 1, 4]]})
    measure = literal.to_measure()
    assert measure.atoms == ((0.0, Fraction(3, 4)), (1.0, Fraction(1, 4)))
    assert measure.mean == pytest.approx(0.25)
    dumped = json.loads(MeasureLiteral.from_measure(measure, label="p").model_dump_json())
    assert dumped == {"atoms": [[0.0, 3, 4], [1.0, 1, 4]], "label": "p"}
    assert all(len(atom) == 3 for atom in dumped["atoms"])


@pytest.mark.parametrize(
    "atoms",
    [
        [[0.0, "3/4"], [1.0, "1/4"]],
        [[0.0, 1, 0]],
        [[0.0, -1, 2], [1.0, 3, 2]],
        [[0.0, 1, 2], [1.0, 1, 4]],
        [],
    ],
)
def test_measure_literal_rejects_bad_atoms(atoms):
    with pytest.raises(ValidationError):
        MeasureLiteral.model_validate({"atoms": atoms})
