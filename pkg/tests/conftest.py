from __future__ import annotations

from collections import defaultdict

import numpy as np
import pytest

_criteria: dict[int, list[tuple[str, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[mark.args[0]].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        parts = _criteria[n]
        bad = [name for name, o in parts if o != "passed"]
        status = "PASS" if not bad else "FAIL"
        detail = f"{len(parts) - len(bad)}/{len(parts)} checks"
        if bad:
            detail += "; failing: " + ", ".join(bad)
        tr.write_line(f"criterion {n:2d}: {status}  ({detail})")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
