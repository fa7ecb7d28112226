import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import pytest

CRITERIA = {
    1: "inverse of s^a/(1+s)^b vs 1F1 form",
    2: "zero-power rows equal the gamma kernel",
    3: "decomposition identity",
    4: "Theorem 1 oracle equivalence (Talbot and GS14)",
    5: "Theorem 2 betamix-wl",
    6: "Theorem 3 gbp-gbp",
    7: "forward-backward consistency",
    8: "Monte Carlo closure",
    9: "negative control",
    10: "moment formula comparison",
    11: "CLI round trip and exit codes",
}


class AcceptanceLog:
    """Collects per-criterion legs; a criterion passes when all its legs pass."""

    def __init__(self):
        self.legs = {}

    def record(self, criterion, ok, detail):
        self.legs.setdefault(criterion, []).append((bool(ok), detail))


def pytest_configure(config):
    config.acceptance = AcceptanceLog()


@pytest.fixture
def acceptance(pytestconfig):
    return pytestconfig.acceptance


def pytest_terminal_summary(terminalreporter, config):
    legs = config.acceptance.legs
    if not legs:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n not in legs:
            terminalreporter.write_line(f"criterion {n:2d} NOT RUN  {title}")
            continue
        ok = all(o for o, _ in legs[n])
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}")
        for leg_ok, detail in legs[n]:
            if not ok or len(legs[n]) == 1:
                terminalreporter.write_line(f"        {'ok  ' if leg_ok else 'FAIL'} {detail}")
