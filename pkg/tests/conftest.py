import numpy as np
import pytest

from wavemc.synthetic import smooth_texture


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def texture():
    return smooth_texture((64, 64), sigma=1.5, seed=7)


def max_band_error(x, y):
    return max(float(np.max(np.abs(p - q))) for p, q in zip(x.planes(), y.planes()))


import time

ACCEPTANCE_LINES = []
SUITE_BUDGET_S = 120.0
_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _START
    lines = list(ACCEPTANCE_LINES)
    if lines:
        ok = elapsed < SUITE_BUDGET_S
        lines.append(f"{'PASS' if ok else 'FAIL'}  suite runtime: {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s)")
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def pytest_sessionfinish(session, exitstatus):
    if ACCEPTANCE_LINES and time.perf_counter() - _START >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
