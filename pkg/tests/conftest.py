import pytest

from qesvar.qes import QesModel
from qesvar.reference import reference_spectrum

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def double_well():
    return QesModel.double_well()


@pytest.fixture(scope="session")
def ref_spectrum(double_well):
    """Default-grid Richardson reference (L=5, N=4000), shared across modules."""
    return reference_spectrum(double_well, k_max=20)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
