from __future__ import annotations

import pytest

from fixlab.errors import SchemaError
from fixlab.suite import CHECKS, CheckResult, RunReport, SuiteConfig, run_check, run_suite

FAST = ("classifier", "poset-counts", "ordinal-laws", "transfinite-iteration")


def test_check_names():
    assert list(CHECKS) == [
        "poset-counts", "completeness-oracle", "progressive-engines", "monotone-engines", "pataraia",
        "fixed-point-operators", "transfinite-iteration", "ordinal-laws", "classifier", "blowup",
        "chain-completeness-drops", "dataflow",
    ]


def test_fast_checks_pass():
    report = run_suite(SuiteConfig(max_size=3, only=FAST))
    assert report.passed
    # reports follow the registry order whatever order --only used
    assert [c.name for c in report.checks] == [n for n in CHECKS if n in FAST]


def test_parallel_matches_serial():
    cfg = SuiteConfig(max_size=3, only=FAST)
    serial = run_suite(cfg).as_json()
    parallel = run_suite(SuiteConfig(max_size=3, only=FAST, jobs=2)).as_json()
    assert serial == parallel


def test_report_excludes_timing():
    result = run_check("poset-counts", SuiteConfig(max_size=2))
    assert result.seconds >= 0
    assert "seconds" not in result.as_json()


def test_failure_carries_witness_and_reproduce():
    report = RunReport("fixlab suite", [CheckResult("x", False, {}, {"n": 1}, "fixlab suite --only x")])
    text = report.as_text()
    assert "FAIL  x" in text and "reproduce: fixlab suite --only x" in text
    assert report.as_json()["checks"][0]["witness"] == {"n": 1}
    assert not report.passed


@pytest.mark.parametrize("kwargs", [dict(max_size=9), dict(jobs=0)])
def test_bad_config(kwargs):
    with pytest.raises(SchemaError):
        SuiteConfig(**kwargs)


def test_unknown_check():
    with pytest.raises(SchemaError):
        run_suite(SuiteConfig(only=("nope",)))


def test_seed_changes_random_checks_only():
    a = run_suite(SuiteConfig(max_size=2, seed=1, only=("ordinal-laws",))).as_json()
    b = run_suite(SuiteConfig(max_size=2, seed=2, only=("ordinal-laws",))).as_json()
    assert a["checks"] == b["checks"]
    assert a["command"] != b["command"]
