import pytest
from hypothesis import settings, strategies as st

from polyauto.poly import Polynomial
from polyauto.ring import QQ, RingSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

Z12 = RingSpec.integers_mod(12)
Z101 = RingSpec.integers_mod(101)


def polynomials(nvars=2, ring=QQ, max_degree=3, max_terms=5):
    exps = st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars).map(tuple)
    if ring.modulus is None:
        coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    else:
        coef = st.integers(0, ring.modulus - 1)
    return st.dictionaries(exps, coef, max_size=max_terms).map(lambda t: Polynomial(nvars, ring, t))


@pytest.fixture
def xy():
    return Polynomial.variables(2)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="also run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# "criterion N: PASS/FAIL ..." lines from test_acceptance.py, repeated at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
