import pytest

from pseudotelepathy.game import build_c5, build_c5_prime


@pytest.fixture(scope="session")
def c5():
    return build_c5()


@pytest.fixture(scope="session")
def c5p():
    return build_c5_prime(3, 1, 1)


ACCEPTANCE_LINES: list[tuple[int, str]] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
