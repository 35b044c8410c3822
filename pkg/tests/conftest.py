from __future__ import annotations

import pytest

CRITERIA = {
    1: "identity suite (exact)",
    2: "enumeration vs Gaussian binomials",
    3: "exhaustive search optima at desk scale",
    4: "certificate exactness",
    5: "full-matrix corroboration",
    6: "measure formulas and moments",
    7: "asymptotic tails and limits",
    8: "small counterexamples to the product bound",
    9: "determinism across thread counts",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _outcomes.setdefault(mark.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if not results:
            continue
        failed = [name for name, o in results if o != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n} [{status}] {CRITERIA[n]} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
