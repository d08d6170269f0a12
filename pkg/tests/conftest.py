import numpy as np
import pytest


def same_up_to_sign(a, b, atol):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return min(np.max(np.abs(a - b)), np.max(np.abs(a + b))) <= atol


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        props = dict(rep.user_properties)
        _criteria[mark.args[0]] = (mark.args[1], rep.outcome, props)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, outcome, props = _criteria[num]
        word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        detail = "; ".join(f"{k}={v}" for k, v in props.items())
        terminalreporter.write_line(f"criterion {num:2d}: {word}  {title}" + (f"  [{detail}]" if detail else ""))
