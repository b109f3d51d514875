import pytest

from polyinv.corpus import load_corpus
from polyinv.multipoly import parse_poly
from polyinv.polymap import HPart

_criteria: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    _, outcomes = _criteria.setdefault(number, (title, []))
    outcomes.append("PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcomes = _criteria[number]
        verdict = "PASS" if outcomes and all(o == "PASS" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"AC{number:<2} {verdict}  {title}")


def hpart(n, *comps):
    return HPart(n, tuple(parse_poly(c, n) for c in comps))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def square():
    return hpart(2, "X2^2", "0")


@pytest.fixture
def tri3():
    return hpart(3, "X2^2 + X3^2", "X3^2", "0")


@pytest.fixture
def vde_plus():
    """van den Essen's H as printed (F = X + H)."""
    return hpart(5, "3*X4^2*X2 - 2*X3*X4*X5", "X4^2*X5", "X4^3", "X5^3", "0")
