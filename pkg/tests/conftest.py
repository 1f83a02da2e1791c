import pytest

from dnsym.symexpr import ProbeConfig


@pytest.fixture(scope="session")
def probe():
    return ProbeConfig()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for n in sorted(SUMMARY):
            terminalreporter.write_line(SUMMARY[n])
