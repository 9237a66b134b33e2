import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from crossmod.corpus import CATALOG, COEFFICIENTS, coefficient  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXAMPLE_NAMES = [ex.name for ex in CATALOG]
COEFF_NAMES = list(COEFFICIENTS)


@pytest.fixture(scope="session")
def cms():
    return {name: coefficient(name) for name in COEFF_NAMES}


@pytest.fixture(scope="session")
def A():
    return coefficient("A")


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str, seconds: float) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail}; {seconds:.2f}s)"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
