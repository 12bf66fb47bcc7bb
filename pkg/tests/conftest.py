import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from psr._backend import available_backends  # noqa: E402

_ACCEPTANCE = []


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call ``criterion(id, text)`` then return/raise."""
    entry = {}

    def record(cid, text):
        entry.update(id=cid, text=text, detail="")
        return entry

    yield record
    if entry:
        rep = getattr(request.node, "rep_call", None)
        entry["passed"] = bool(rep and rep.passed)
        _ACCEPTANCE.append(entry)


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(_ACCEPTANCE, key=lambda e: int(e["id"])):
        mark = "PASS" if e["passed"] else "FAIL"
        detail = f"  [{e['detail']}]" if e["detail"] else ""
        terminalreporter.write_line(f"{mark}  AC{e['id']:>2}  {e['text']}{detail}")
