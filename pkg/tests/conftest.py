import pytest

from cfcheck.analysis import sr_formula
from cfcheck.scenario_file import load_bundled
from cfcheck.worlds import enumerate_candidates, filter_possible

ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture(scope="session")
def her():
    return load_bundled("her")


@pytest.fixture(scope="session")
def her_possible(her):
    return filter_possible(enumerate_candidates(her), her)


@pytest.fixture(scope="session")
def sr(her):
    return sr_formula(her)


@pytest.fixture
def world(her):
    """Build a HER world from a literal such as ``"L2+,R2+"``."""
    from cfcheck.scenario_file import parse_world

    return lambda text: parse_world(text, her)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (len(k), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
