import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from combcontracts import SPACost, make_additive, make_budget_additive, make_explicit

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

Fr = Fraction


@pytest.fixture
def f1():
    # f({0}) = 3/10, f({1}) = 1/5, f({0,1}) = 1
    return make_explicit(["0", "3/10", "1/5", "1"])


@pytest.fixture
def f1_prices():
    return (Fr(1, 10), Fr(1, 10))


@pytest.fixture
def f2():
    return make_budget_additive(["3/5", "1/2"], 1)


@pytest.fixture
def f2_cost():
    return SPACost(["1/10", "3/10"])


@pytest.fixture
def f3():
    return make_additive(["1/2", "1/3", "1/4"])


@pytest.fixture
def f3_cost():
    return SPACost([0, 0, 0], ["0", "1/10", "3/10", "6/10"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "REPORT", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.REPORT:
        terminalreporter.write_line(line)
