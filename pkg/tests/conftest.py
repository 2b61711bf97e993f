import pytest
from hypothesis import HealthCheck, settings

from embthick.generators import bouquet2_torus, heawood_torus, k7_torus, kn

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def k7():
    return k7_torus()


@pytest.fixture(scope="session")
def heawood():
    return heawood_torus()


@pytest.fixture(scope="session")
def bouquet():
    return bouquet2_torus()


@pytest.fixture(scope="session")
def k4():
    return kn(4)
