"""Shared fixtures and the per-criterion acceptance summary.

Tests tagged ``@pytest.mark.criterion(k)`` feed a PASS/FAIL table printed at
the end of the run: criterion ``k`` passes when every test carrying its tag
passed.
"""

import pytest

ACCEPTANCE_TITLES = {
    1: "model constants",
    2: "concentrating-sequence norms",
    3: "critical-exponent dichotomy",
    4: "concentration-compactness dichotomy",
    5: "rearrangement suite",
    6: "Young-function power and splitting inequalities",
    7: "dilation invariance of the subcritical quotient",
    8: "subcritical-supremum envelope slope",
    9: "weak gradient against central differences",
    10: "mountain-pass solve",
    11: "norm sandwich and the critical-case finiteness pattern",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(int(marker.args[0]), []).append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_TITLES):
        runs = _outcomes.get(k)
        if not runs:
            continue
        failed = [name for name, state in runs if state != "passed"]
        verdict = "FAIL" if failed else "PASS"
        detail = f" (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {k:2d} {verdict}: {ACCEPTANCE_TITLES[k]}{detail}")
