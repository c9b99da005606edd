"""Suite plumbing at reduced case counts. The full-strength runs live in
the acceptance tests; here the point is that reports carry the right
labels, values, and summary text."""

import math

import pytest

from curbench.errors import ConfigError
from curbench.suites import (
    SUITE_NAMES,
    SuiteReport,
    run_property_suite,
    suite_bounds,
    suite_recovery,
    suite_srrqr_guarantees,
)


def test_srrqr_suite_small_run_passes():
    report = suite_srrqr_guarantees(seed=0, cases=40)
    assert isinstance(report, SuiteReport)
    assert report.name == "srrqr-guarantees" and report.seed == 0
    assert report.passed
    labels = [c.label for c in report.checks]
    assert labels == ["condition-a", "condition-b", "condition-c", "swap-budget", "determinism"]
    for label in ("condition-a", "condition-b", "condition-c", "determinism"):
        assert report.check(label).value == 0  # violation counters
    assert report.check("swap-budget").value >= 0  # worst swap count seen


def test_bounds_suite_small_run_passes():
    report = suite_bounds(seed=0, cases=60)
    assert report.passed
    assert report.check("tail-constants").passed
    assert report.check("triangle-split").value == 0
    with pytest.raises(KeyError):
        report.check("no-such-check")


def test_recovery_suite_small_run_passes():
    trials = 8
    report = suite_recovery(seed=0, trials=trials)
    assert report.passed
    assert report.check("cross-oneshot").value >= math.ceil(0.9 * trials)
    assert report.check("block-iterative").value >= math.ceil(0.95 * trials)
    assert 0.0 <= report.check("structured-floor").value <= 1.0


def test_summary_layout():
    report = suite_srrqr_guarantees(seed=3, cases=10)
    text = report.summary()
    lines = text.splitlines()
    assert lines[0] == "suite srrqr-guarantees (seed 3)"
    assert all(line.startswith("  [PASS]") for line in lines[1:-1])
    assert lines[-1] == "result: PASS"


def test_dispatch_by_name():
    report = run_property_suite("bounds", seed=1, cases=25)
    assert report.name == "bounds" and report.seed == 1
    assert set(SUITE_NAMES) == {"srrqr-guarantees", "bounds", "recovery"}
    with pytest.raises(ConfigError) as err:
        run_property_suite("everything")
    assert err.value.field == "suite"
