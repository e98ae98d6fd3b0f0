import json
import os
import re

import pytest

import report_cli
from src.report import checks
from src.report.checks import (
    SUITES,
    Check,
    Workspace,
    design_check,
    property_suite,
    run_check,
    run_suite,
    select,
    slug,
)
from src.report.commands import cmd_blocks, cmd_verify
from src.report.models import CheckResult, SuiteReport, dump_json
from src.utils.config import Settings
from src.utils.observability import ObservabilityContext


def test_status_follows_equality():
    assert CheckResult(check_id="a", expected={"x": 1}, observed={"x": 1}).passed
    assert not CheckResult(check_id="b", expected=1, observed=2).passed
    assert CheckResult(check_id="c", expected=1, observed=1, status="fail").status == "pass"


def test_runtime_is_not_serialized():
    result = CheckResult(check_id="a", expected=1, observed=1, runtime_ms=12.5)
    assert "runtime_ms" not in result.model_dump()


def test_dump_json_is_canonical():
    assert dump_json({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_slug():
    assert slug("comp(u:7,3)") == "comp-u73"
    assert slug("plain:5,2") == "plain52"


def test_exceptions_become_failures(workspace):
    def boom(ws):
        raise RuntimeError("no")

    result = run_check(Check("boom-q16", 16, boom), workspace)
    assert not result.passed
    assert result.observed == {"error": "RuntimeError"}
    assert result.detail == "no"


def test_heavy_checks_are_gated():
    q64 = SUITES[64]()
    assert len(select(q64, heavy=False)) < len(select(q64, heavy=True)) == len(q64)
    assert all(c.tags == ("design",) for c in select(SUITES[16](), heavy=False, tags={"design"}))


@pytest.mark.parametrize("suite", [SUITES[16], SUITES[32], SUITES[64], property_suite])
def test_check_ids_are_unique(suite):
    ids = [c.check_id for c in suite()]
    assert len(ids) == len(set(ids))


def test_duplicate_ids_are_refused(workspace):
    check = design_check(16, "plain:5,2")
    with pytest.raises(ValueError):
        run_suite([check, check], workspace)


def test_suite_reports_are_deterministic(workspace):
    checks = [design_check(16, "plain:5,2", check_id="steiner-plain52-q16"), design_check(16, "u:4,2")]
    first = SuiteReport(command="paper-suite", q_list=[16], heavy=False, results=run_suite(checks, workspace))
    second = SuiteReport(command="paper-suite", q_list=[16], heavy=False, results=run_suite(checks, workspace))
    assert first.to_json() == second.to_json()
    data = json.loads(first.to_json())
    assert data["results"][0]["observed"] == {"t": 3, "lambda": 1, "num_blocks": 68, "lower_strengths": True}
    assert not first.failed


def test_blocks_and_verify_commands(settings, tmp_path):
    path = tmp_path / "steiner.json"
    blocks = cmd_blocks(16, "plain:5,2", str(path), settings)
    assert blocks.num_blocks == 68
    assert cmd_verify(str(path), 3, settings, lam=1).passed
    assert not cmd_verify(str(path), 3, settings, lam=2).passed
    assert (tmp_path / "verify-q16.json").exists()


def test_cli_exit_codes(tmp_path):
    out = str(tmp_path)
    path = tmp_path / "b.json"
    assert report_cli.main(["blocks", "--q", "16", "--family", "plain:5,2", "--file", str(path), "--out", out]) == 0
    assert report_cli.main(["verify", str(path), "--t", "3", "--lambda", "1", "--out", out]) == 0
    assert report_cli.main(["verify", str(path), "--t", "3", "--lambda", "5", "--out", out]) == 1
    assert report_cli.main(["blocks", "--q", "16", "--family", "u:6,2", "--out", out]) == 2
    assert report_cli.main(["blocks", "--q", "20", "--family", "plain:5,2", "--out", out]) == 2
    path.write_text(path.read_text().replace("[0, ", "[0, 0, ", 1))
    assert report_cli.main(["verify", str(path), "--t", "3", "--out", out]) == 2
    assert report_cli.main(["verify", str(tmp_path / "missing.json"), "--t", "3", "--out", out]) == 2


def test_cli_rejects_bad_options(tmp_path):
    assert report_cli.main(["properties", "--jobs", "0", "--out", str(tmp_path)]) == 2


def test_slug_is_filename_safe():
    tag = "general:4:s4_2^2 + s4_1*s4_3"
    assert re.fullmatch(r"[A-Za-z0-9_-]+", slug(tag))
    assert slug(tag) != slug("general:4:s4_2^2 + s4_1+s4_3")


def test_blocks_default_path_for_general_family(settings, tmp_path):
    cmd_blocks(16, "general:4:s4_2^2 + s4_1*s4_3", None, settings)
    written = [p.name for p in tmp_path.glob("blocks-*.json")]
    assert len(written) == 1
    assert re.fullmatch(r"blocks-[A-Za-z0-9_-]+-q16\.json", written[0])


def test_check_verdicts_are_traced(workspace, monkeypatch):
    seen = []
    monkeypatch.setattr(checks, "track_check_result", lambda *args: seen.append(args))
    run_check(Check("same-q16", 16, lambda ws: (1, 1)), workspace)
    run_check(Check("differs-q32", 32, lambda ws: (1, 2)), workspace)
    assert [args[:3] for args in seen] == [("same-q16", 16, "pass"), ("differs-q32", 32, "fail")]
    assert all(args[3] >= 0 for args in seen)


def test_session_context_records_status():
    with ObservabilityContext("ok-session") as ctx:
        pass
    assert ctx.status == "success"
    with pytest.raises(RuntimeError):
        with ObservabilityContext("failing-session") as failing:
            raise RuntimeError("stop")
    assert failing.status == "error"


def test_q64_six_point_supports_are_not_heavy():
    light = {c.check_id for c in select(SUITES[64](), heavy=False)}
    assert "bch-supports6-count-q64" in light


@pytest.mark.slow
def test_q64_six_point_supports_match_residual_family():
    ws = Workspace(Settings(jobs=os.cpu_count() or 1))
    check = next(c for c in SUITES[64]() if c.check_id == "bch-supports6-count-q64")
    result = run_check(check, ws)
    assert result.passed
    assert result.observed == 1048320
