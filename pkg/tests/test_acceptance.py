"""The nine acceptance criteria, one test each.

Each test prints a single ``[PASS]``/``[FAIL]`` line and then asserts both
the verdict and, where one is set, the runtime budget.
"""
import json

import pytest

from nonadditive import suites


@pytest.mark.parametrize("criterion", suites.CRITERIA, ids=lambda f: f.__name__.replace("_", "-"))
def test_criterion(criterion, capsys):
    report = criterion(seed=0)
    with capsys.disabled():
        print("\n" + report.line())
    assert report.passed, json.dumps(report.detail, sort_keys=True)[:2000]
    if report.budget is not None:
        assert report.seconds < report.budget, f"{report.name} took {report.seconds:.1f}s"


def test_reports_are_deterministic():
    a = suites.CRITERIA[0](seed=0).to_json()
    b = suites.CRITERIA[0](seed=0).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
