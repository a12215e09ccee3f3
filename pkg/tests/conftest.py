import os
import sys
import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SUITE_BUDGET = 120.0
_RESULTS: list[tuple[str, bool, str]] = []
_START: dict = {}


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


class Recorder:
    """Records one pass/fail line per acceptance criterion."""

    @contextmanager
    def criterion(self, label: str, budget: float):
        t0 = time.perf_counter()
        detail = {"text": ""}
        try:
            yield detail
        except BaseException:
            elapsed = time.perf_counter() - t0
            _RESULTS.append((label, False, f"{detail['text']} ({elapsed:.2f} s, budget {budget:g} s)"))
            raise
        elapsed = time.perf_counter() - t0
        ok = elapsed < budget
        _RESULTS.append((label, ok, f"{detail['text']} ({elapsed:.2f} s, budget {budget:g} s)"))
        print(f"[{label}] {'PASS' if ok else 'FAIL'} {detail['text']} ({elapsed:.2f} s)")
        assert ok, f"{label} took {elapsed:.2f} s, budget {budget} s"


@pytest.fixture
def acceptance():
    return Recorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS and "t" not in _START:
        return
    tr = terminalreporter
    elapsed = time.perf_counter() - _START.get("t", time.perf_counter())
    if _RESULTS:
        tr.section("acceptance criteria")
        for label, ok, text in _RESULTS:
            tr.write_line(f"{label}: {'PASS' if ok else 'FAIL'} {text}")
        ok9 = elapsed < SUITE_BUDGET
        tr.write_line(f"criterion 9 (full suite < {SUITE_BUDGET:g} s): "
                      f"{'PASS' if ok9 else 'FAIL'} ({elapsed:.1f} s)")


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _START.get("t", time.perf_counter())
    if _RESULTS and elapsed >= SUITE_BUDGET and exitstatus == 0:
        session.exitstatus = 1
