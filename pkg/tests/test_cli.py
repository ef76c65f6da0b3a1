import csv
import io
import json

from main import run


def test_no_arguments_is_a_usage_error(capsys):
    assert run([]) == 2
    assert "Usage" in capsys.readouterr().err


def test_unknown_command():
    assert run(["no-such-suite"]) == 2


def test_exact_trace_prints_the_value(capsys):
    assert run(["exact-trace", "--no-controls"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "3/16"
    assert "exact-trace: PASS" in out


def test_exact_trace_expectation_mismatch_fails():
    assert run(["exact-trace", "--no-controls", "--expect", "1/4"]) == 1


def test_exact_trace_custom_word(capsys):
    word = json.dumps({"projections": {"p": "1/3", "q": "1/3"}, "word": ["p", "q"]})
    assert run(["exact-trace", "--no-controls", "--word", word, "--expect", "1/9"]) == 0
    assert capsys.readouterr().out.startswith("1/9")


def test_bad_word_json_is_a_config_error():
    assert run(["exact-trace", "--word", "{not json"]) == 2


def test_bad_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("[1, 2]", encoding="utf-8")
    assert run(["exact-trace", "--config", str(path)]) == 2


def test_out_of_range_alpha_is_a_config_error():
    assert run(["two-proj", "--alpha", "3/4"]) == 2


def test_json_report(tmp_path):
    out = tmp_path / "report.json"
    assert run(["exact-trace", "--no-controls", "--seed", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["schema"] == 1
    assert data["suite"] == "exact-trace"
    assert data["verdict"] == "pass"
    assert data["config"]["seed"] == 3


def test_csv_report(tmp_path):
    out = tmp_path / "report.csv"
    assert run(["exact-trace", "--no-controls", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
    assert rows[0]["check"] == "trace"
    assert rows[0]["verdict"] == "pass"


def test_two_proj_suite_without_matrices():
    # alpha * N is not an integer, so only the quadrature model runs
    assert run(["two-proj", "--alpha", "1/4", "--N", "63"]) == 0


def test_convolve_suite_without_matrices():
    assert run(["convolve", "--alpha", "1/4", "--N", "63"]) == 0


def test_all_writes_one_report_per_suite(tmp_path):
    code = run(["all", "--suites", "exact-trace,two-proj", "--alpha", "1/2", "--N", "63", "--out", str(tmp_path)])
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["exact-trace.json", "two-proj.json"]


def test_reassemble_suite_at_reduced_scale(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {
                "N": 128,
                "trials": 40,
                "max_length": 4,
                "generation_N": 32,
                "generation_seeds": 2,
                "bias_sizes": [64, 128, 256],
                "controls": False,
            }
        ),
        encoding="utf-8",
    )
    out = tmp_path / "reassemble.json"
    assert run(["reassemble", "--config", str(config), "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    checks = {c["check"]: c for c in data["checks"]}
    assert checks["generation"]["value"] == 1
    assert -1.5 <= checks["bias_slope"]["value"] <= -0.5
    assert [f["label"] for f in data["freeness"]] == ["reassembled", "original"]


def test_convolve_report_lists_the_input_law(tmp_path):
    out = tmp_path / "convolve.json"
    assert run(["convolve", "--alpha", "1/4", "--N", "63", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["measures"] == [{"atoms": [[0.0, 3, 4], [1.0, 1, 4]], "label": "p[1/4]"}]
    checks = {c["check"]: c for c in data["checks"]}
    assert checks["r_transform_consistency[1/4]"]["verdict"] == "pass"


def test_reports_are_reproducible(tmp_path):
    reports, codes = [], []
    for name in ("first.json", "second.json"):
        out = tmp_path / name
        codes.append(run(["two-proj", "--alpha", "1/4", "--N", "64", "--seed", "5", "--out", str(out)]))
        data = json.loads(out.read_text(encoding="utf-8"))
        data.pop("generated_at")
        reports.append(json.dumps(data, sort_keys=True))
    assert codes[0] == codes[1]
    assert reports[0] == reports[1]
