import math

import numpy as np
import pytest

from polcoherence.ensemble import make_pair_state


@pytest.fixture
def state():
    """Reference preparation: psi = pi, zeta = 0, I0 = 1."""
    return make_pair_state(math.pi, 0.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240928)


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    num, title = marker.args
    _ACCEPTANCE[num] = (title, report.outcome.upper(), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, outcome, dur = _ACCEPTANCE[num]
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {num}: {title} ({dur:.2f} s)")
