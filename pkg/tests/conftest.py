import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from floerkit.poly import Poly

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

monomials = st.tuples(st.integers(0, 6), st.integers(0, 6))
polys = st.lists(monomials, max_size=8).map(Poly)


@pytest.fixture
def rng():
    return random.Random(20261016)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
