import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from ccdrel.dsl import bundled

settings.register_profile(
    "ccd", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("ccd")


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def mcc():
    return bundled("mcc.ccd")


@pytest.fixture(scope="session")
def mcc_complete():
    return bundled("mcc_complete.ccd")


@pytest.fixture(scope="session")
def mcc_reduced():
    return bundled("mcc_reduced.ccd")


@pytest.fixture(scope="session")
def ieee39():
    return bundled("ieee39.ccd")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
