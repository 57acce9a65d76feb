import os

import pytest
from hypothesis import HealthCheck, settings

from charseries.corpus import available_orders, bundled
from charseries.pcgroup import PcPresentation, parse_presentation

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

D4_TEXT = "p 2\nn 3\npow 2 = 3\ncomm 2 1 = 3\n"
Q8_TEXT = "p 2\nn 3\npow 1 = 3\npow 2 = 3\ncomm 2 1 = 3\n"
EXTRASPECIAL_27 = "p 3\nn 3\ncomm 2 1 = 3\n"


@pytest.fixture
def d4():
    return parse_presentation(D4_TEXT, name="D4")


@pytest.fixture
def q8():
    return parse_presentation(Q8_TEXT, name="Q8")


@pytest.fixture
def heis3():
    return parse_presentation(EXTRASPECIAL_27, name="3^{1+2}")


def elementary(p, n):
    return PcPresentation(p, n)


def corpus(max_order=64):
    out = []
    for order in available_orders():
        if order <= max_order:
            out.extend(bundled(order))
    return out


def corpus_ids(entries):
    return [e.group_id for e in entries]


# acceptance criteria report: number -> (status, title, detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n} [{status}] {title}: {detail}")
