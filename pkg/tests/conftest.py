from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from netlogic import new_model

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def mt():
    """Two agents, a influences b, only a has f, both thresholds 1/2."""
    return new_model("ab", "fg", [("a", "b")], {"a": ["f"], "b": []}, "1/2", "1/2")


@pytest.fixture
def fixture_paths():
    return sorted(FIXTURES.glob("*.json"))


ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
            terminalreporter.write_line(ACCEPTANCE[key])
