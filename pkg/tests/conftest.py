from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from biocascade.rfnc import Const, Input, Product, Quotient, Sum

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

N_INPUTS = 3

rationals = st.fractions(min_value=0, max_value=20, max_denominator=9)
positive = st.fractions(min_value=Fraction(1, 9), max_value=20, max_denominator=9)
points = st.lists(positive, min_size=N_INPUTS, max_size=N_INPUTS)

leaves = st.one_of(st.builds(Const, rationals), st.builds(Input, st.integers(0, N_INPUTS - 1)))


def _grow(children):
    return st.one_of(*(st.builds(c, children, children) for c in (Sum, Product, Quotient)))


exprs = st.recursive(leaves, _grow, max_leaves=10)


# -- acceptance reporting: one PASS/FAIL line per criterion ---------------

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and not report.failed):
        return
    n, title = marker.args
    ok = _ACCEPTANCE.get(n, (title, True))[1]
    _ACCEPTANCE[n] = (title, ok and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
