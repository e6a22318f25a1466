"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_OUTCOMES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label such as '7' or '14b'")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    label, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    prev = _OUTCOMES.get(label, (title, True))
    if rep.when == "call" or failed:
        _OUTCOMES[label] = (title, prev[1] and not failed)


def _order(label):
    digits = "".join(ch for ch in label if ch.isdigit())
    return int(digits), label


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_OUTCOMES, key=_order):
        title, ok = _OUTCOMES[label]
        terminalreporter.write_line(f"criterion {label:>3}: {'PASS' if ok else 'FAIL'}  {title}")
