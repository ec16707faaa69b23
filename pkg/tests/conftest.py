import sys
import pytest
from hypothesis import settings

from nwvoa.lattice import nw_frame
from nwvoa.nw import inverse_qhr_map, wakimoto_map

settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def frame():
    return nw_frame()


@pytest.fixture(scope="session")
def inverse_qhr(frame):
    return inverse_qhr_map(frame)


@pytest.fixture(scope="session")
def wakimoto(frame):
    return wakimoto_map(frame)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
