import pytest

from hodgekit import sweeps


@pytest.fixture(scope="session")
def dt3():
    return sweeps.diagonal(3)


@pytest.fixture(scope="session")
def dt4():
    return sweeps.diagonal(4)


@pytest.fixture(scope="session")
def sym3():
    return sweeps.symmetric(3)


@pytest.fixture(scope="session")
def u45():
    return sweeps.bergman_with_simplices(4, 5)


@pytest.fixture
def rng():
    return sweeps.make_rng()


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""
    def record(number, title, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        print(line)
        _VERDICTS.append(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
