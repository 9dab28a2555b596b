import pytest
from hypothesis import HealthCheck, settings

from hopforders import nikshych as nk

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def H3():
    return nk.build_H(3)


@pytest.fixture(scope="session")
def D3(H3):
    return nk.build_H_dual_tables(3, H3.tower)


@pytest.fixture(scope="session")
def H3_verified():
    return nk.verified_H(3)


_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        num = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {num:2d} {_ACCEPTANCE[name]}  {label}")
